//! Howell form, kernels, intersections and inverses against brute-force span
//! enumeration.

use std::collections::BTreeSet;

use comod_core::howell::{determinant, sum_rowspans};
use comod_core::{howell, intersect_rowspans, is_unit_matrix, kernel, solve, RMatrix, RingSpec};
use proptest::prelude::*;

fn brute_span(m: &RMatrix) -> BTreeSet<Vec<u64>> {
    let ring = m.ring();
    let mut span = BTreeSet::new();
    span.insert(vec![0; m.cols()]);
    // Closure under adding generators terminates at the full span.
    loop {
        let mut grew = false;
        let current: Vec<Vec<u64>> = span.iter().cloned().collect();
        for v in &current {
            for i in 0..m.rows() {
                let w: Vec<u64> = v.iter().zip(m.row(i)).map(|(&a, &b)| ring.add(a, b)).collect();
                grew |= span.insert(w);
            }
        }
        if !grew {
            return span;
        }
    }
}

fn all_vectors(ring: RingSpec, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                ring.elements().map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn arb_matrix() -> impl Strategy<Value = RMatrix> {
    (
        prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12]),
        0usize..4,
        1usize..4,
    )
        .prop_flat_map(|(n, rows, cols)| {
            prop::collection::vec(0..n, rows * cols)
                .prop_map(move |data| RMatrix::from_vec(RingSpec::new(n).unwrap(), rows, cols, data).unwrap())
        })
}

fn arb_pair() -> impl Strategy<Value = (RMatrix, RMatrix)> {
    (
        prop::sample::select(vec![2u64, 4, 6, 8, 9]),
        1usize..4,
        1usize..4,
        1usize..4,
    )
        .prop_flat_map(|(n, r1, r2, cols)| {
            (
                prop::collection::vec(0..n, r1 * cols),
                prop::collection::vec(0..n, r2 * cols),
            )
                .prop_map(move |(a, b)| {
                    let ring = RingSpec::new(n).unwrap();
                    (
                        RMatrix::from_vec(ring, r1, cols, a).unwrap(),
                        RMatrix::from_vec(ring, r2, cols, b).unwrap(),
                    )
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn howell_preserves_span(m in arb_matrix()) {
        let h = howell(&m);
        prop_assert_eq!(brute_span(h.matrix()), brute_span(&m));
        prop_assert_eq!(h.span_size(), brute_span(&m).len() as u128);
        prop_assert_eq!(&h.transform().mul(&m).unwrap(), h.matrix());
        // idempotent
        prop_assert_eq!(howell(h.matrix()).matrix().clone(), h.matrix().clone());
        let listed: BTreeSet<Vec<u64>> = h.span_elements().into_iter().collect();
        prop_assert_eq!(listed.len() as u128, h.span_size());
        prop_assert_eq!(listed, brute_span(&m));
    }

    #[test]
    fn howell_is_canonical((a, b) in arb_pair()) {
        let same_span = brute_span(&a) == brute_span(&b);
        prop_assert_eq!(howell(&a) .matrix() == howell(&b).matrix(), same_span);
        // a re-generated span gives the same form
        let mixed = sum_rowspans(&a, &a.scale(a.ring().modulus() - 1)).unwrap();
        prop_assert_eq!(mixed.matrix().clone(), howell(&a).matrix().clone());
        let combos = b.mul(&RMatrix::identity(b.ring(), b.cols())).unwrap();
        let joint = sum_rowspans(&a, &combos).unwrap();
        let joint_rev = sum_rowspans(&combos, &a).unwrap();
        prop_assert_eq!(joint.matrix(), joint_rev.matrix());
    }

    #[test]
    fn reduction_picks_coset_representatives(m in arb_matrix()) {
        let h = howell(&m);
        let ring = m.ring();
        let span = brute_span(&m);
        let ranges = h.residue_ranges();
        let mut reps = BTreeSet::new();
        for v in all_vectors(ring, m.cols()) {
            let r = h.reduce(&v);
            prop_assert!(r.iter().zip(&ranges).all(|(&x, &b)| x < b));
            let diff: Vec<u64> = v.iter().zip(&r).map(|(&a, &b)| ring.sub(a, b)).collect();
            prop_assert!(span.contains(&diff));
            prop_assert_eq!(h.contains(&v), span.contains(&v));
            reps.insert(r);
        }
        let total = (ring.modulus() as u128).pow(m.cols() as u32);
        prop_assert_eq!(reps.len() as u128, total / h.span_size());
    }

    #[test]
    fn kernel_is_complete(m in arb_matrix()) {
        let k = kernel(&m);
        let ring = m.ring();
        let brute: BTreeSet<Vec<u64>> = all_vectors(ring, m.rows())
            .into_iter()
            .filter(|x| m.row_apply(x).iter().all(|&v| v == 0))
            .collect();
        prop_assert_eq!(brute_span(k.matrix()), brute);
    }

    #[test]
    fn intersection_matches_sets((a, b) in arb_pair()) {
        let i = intersect_rowspans(&a, &b).unwrap();
        let brute: BTreeSet<Vec<u64>> =
            brute_span(&a).intersection(&brute_span(&b)).cloned().collect();
        prop_assert_eq!(brute_span(i.matrix()), brute);
    }

    #[test]
    fn solve_reproduces_rhs((a, b) in arb_pair()) {
        // a^T x = b^T is solvable iff every row of b lies in the span of a's rows.
        let at = a.transpose();
        let bt = b.transpose();
        let solvable = brute_span(&b).is_subset(&brute_span(&a));
        match solve(&at, &bt).unwrap() {
            Some(x) => {
                prop_assert!(solvable);
                prop_assert_eq!(at.mul(&x).unwrap(), bt);
            }
            None => prop_assert!(!solvable),
        }
    }
}

fn brute_inverse(a: &RMatrix) -> Option<RMatrix> {
    let ring = a.ring();
    let size = a.rows();
    let id = RMatrix::identity(ring, size);
    all_vectors(ring, size * size)
        .into_iter()
        .map(|d| RMatrix::from_vec(ring, size, size, d).unwrap())
        .find(|b| a.mul(b).unwrap() == id && b.mul(a).unwrap() == id)
}

#[test]
fn units_of_m2_z2() {
    let ring = RingSpec::new(2).unwrap();
    let mut units = 0;
    for d in all_vectors(ring, 4) {
        let a = RMatrix::from_vec(ring, 2, 2, d).unwrap();
        let t = is_unit_matrix(&a).unwrap();
        assert_eq!(t.is_unit(), brute_inverse(&a).is_some());
        if let Some(inv) = t.inverse {
            assert_eq!(inv.mul(&a).unwrap(), RMatrix::identity(ring, 2));
            assert_eq!(a.mul(&inv).unwrap(), RMatrix::identity(ring, 2));
            units += 1;
        }
    }
    assert_eq!(units, 6);
}

#[test]
fn units_of_m2_z4_and_z6_match_brute_force() {
    for n in [4u64, 6] {
        let ring = RingSpec::new(n).unwrap();
        let mut units = 0;
        for d in all_vectors(ring, 4) {
            let a = RMatrix::from_vec(ring, 2, 2, d).unwrap();
            let det = determinant(&a).unwrap();
            let brute_det = ring.sub(ring.mul(a.get(0, 0), a.get(1, 1)), ring.mul(a.get(0, 1), a.get(1, 0)));
            assert_eq!(det, brute_det);
            if is_unit_matrix(&a).unwrap().is_unit() {
                units += 1;
            }
        }
        // |GL2(Z/4)| = 96, |GL2(Z/6)| = |GL2(F2)|*|GL2(F3)| = 6*48
        let expected = if n == 4 { 96 } else { 288 };
        assert_eq!(units, expected);
    }
}

#[test]
fn determinant_of_3x3_matches_cofactor_expansion() {
    let ring = RingSpec::new(12).unwrap();
    let mut state = 7u64;
    for _ in 0..500 {
        let data: Vec<u64> = (0..9)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (state >> 33) % 12
            })
            .collect();
        let a = RMatrix::from_vec(ring, 3, 3, data).unwrap();
        let g = |i, j| a.get(i, j) as i128;
        let cof = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        assert_eq!(determinant(&a).unwrap(), ring.reduce_signed(cof));
    }
}

#[test]
fn brute_force_examples() {
    // [[2,0],[0,2]] over Z/4: all 16 row combinations land in the Howell span.
    let ring = RingSpec::new(4).unwrap();
    let m = RMatrix::from_rows(ring, 2, &[vec![2, 0], vec![0, 2]]);
    assert_eq!(brute_span(&m), brute_span(howell(&m).matrix()));
    assert_eq!(brute_span(&m).len(), 4);
    // kernel of [[1,1],[1,1]] over Z/2 by enumerating all four row vectors
    let r2 = RingSpec::new(2).unwrap();
    let a = RMatrix::from_rows(r2, 2, &[vec![1, 1], vec![1, 1]]);
    let brute: Vec<Vec<u64>> = all_vectors(r2, 2)
        .into_iter()
        .filter(|x| a.row_apply(x).iter().all(|&v| v == 0))
        .collect();
    assert_eq!(brute, vec![vec![0, 0], vec![1, 1]]);
    assert_eq!(kernel(&a).matrix().row_vecs(), vec![vec![1, 1]]);
}
