#![no_main]

use comod_core::{howell, RMatrix, RingSpec};
use libfuzzer_sys::fuzz_target;

// Bytes decode as: modulus, rows, cols, then entries. The Howell form is
// idempotent, independent of row order, and spans the same module.
fuzz_target!(|data: &[u8]| {
    let [n, rows, cols, entries @ ..] = data else { return };
    let Ok(ring) = RingSpec::new(u64::from(*n).max(2)) else {
        return;
    };
    let (rows, cols) = (usize::from(rows % 6), usize::from(cols % 6) + 1);
    if entries.len() < rows * cols {
        return;
    }
    let values = entries[..rows * cols]
        .iter()
        .map(|&b| ring.reduce(u64::from(b)))
        .collect();
    let m = RMatrix::from_vec(ring, rows, cols, values).expect("shape");
    let h = howell(&m);
    assert_eq!(howell(h.matrix()).matrix(), h.matrix());
    let reversed = m.select_rows((0..rows).rev());
    assert_eq!(howell(&reversed).matrix(), h.matrix());
    for i in 0..rows {
        assert!(h.contains(m.row(i)));
    }
    for i in 0..h.matrix().rows() {
        assert!(howell(&m).contains(h.matrix().row(i)));
    }
});
