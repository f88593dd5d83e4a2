//! The SL(2n,4) block family and unitriangular groups against enumeration.

mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{closure, commutator_set};
use sdp_core::families::{
    build_family, counterexample_for_d, counterexample_search, recheck_witness, sl2_group,
    sl6_gap_witness, structural_count, structural_member, structural_validate, unitriangular_group,
    Member,
};
use sdp_core::gf4::{enumerate_sl2, enumerate_trace_zero};
use sdp_core::group::commutator_group;
use sdp_core::series::{gamma, iterated_commutator, lower_central_series};
use sdp_core::{ChainConfig, Gf4, Mat2, Matrix};

#[test]
fn trace_zero_blocks() {
    let t = enumerate_trace_zero();
    let brute: Vec<Mat2> = Mat2::all()
        .filter(|b| (b.get(0, 0) + b.get(1, 1)).is_zero())
        .collect();
    assert_eq!(t.len(), 64);
    assert_eq!(
        t.iter().collect::<HashSet<_>>(),
        brute.iter().collect::<HashSet<_>>()
    );
    let sl2 = enumerate_sl2();
    assert_eq!(sl2.len(), 60);
    for a in &sl2 {
        assert_eq!(a.det(), Gf4::ONE);
        for b in &t {
            let c = b.conj(a).unwrap();
            assert!(c.trace().is_zero());
        }
    }
    let group = closure(&Matrix::identity(2), sl2_group().generators());
    assert_eq!(group.len(), 60);
}

#[test]
fn small_family_members_match_enumeration() {
    let fam = build_family(2).unwrap();
    let m: HashSet<Matrix> = enumerate_trace_zero()
        .iter()
        .map(|b| Matrix::elementary_block(2, 0, 1, b))
        .collect();
    assert_eq!(closure(&Matrix::identity(4), &fam.m), m);
    let n: HashSet<Matrix> = Gf4::ALL
        .iter()
        .map(|&a| Matrix::elementary_block(2, 0, 1, &Mat2::scalar(a)))
        .collect();
    assert_eq!(closure(&Matrix::identity(4), &fam.normal), n);
    let g = closure(&Matrix::identity(4), &fam.g);
    assert_eq!(g.len(), 60 * 64);
    for x in &g {
        assert!(structural_member(2, Member::G, x));
    }
    let gn = commutator_set(&Matrix::identity(4), &g, &n);
    assert_eq!(gn.len(), 1, "[G,N] is trivial for n = 2: N is central in M");
}

#[test]
fn sl6_orders() {
    let fam = build_family(3).unwrap();
    let config = ChainConfig::default();
    let g = fam.handle(Member::G, config).unwrap();
    let n = fam.handle(Member::N, config).unwrap();
    assert_eq!(g.order(), BigUint::from(62_914_560u64));
    assert_eq!(n.order(), BigUint::from(4096u32));
    assert_eq!(n.order(), structural_count(3, Member::N));
    let elements = n.chain().elements();
    assert!(elements.iter().all(|x| structural_member(3, Member::N, x)));
    let gn = iterated_commutator(&g, &n, 1);
    let gnn = iterated_commutator(&g, &n, 2);
    let nn = gamma(&n, 2);
    assert_eq!(gn.order(), BigUint::from(64u32));
    assert_eq!(nn.order(), BigUint::from(4u32));
    assert!(gnn.is_trivial());
    let w = sl6_gap_witness();
    assert!(nn.contains(&w));
    assert!(!gnn.contains(&w));
    assert!(commutator_group(&g, &g).same_group(&g));
}

#[test]
fn large_families_validate_structurally() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 5..=8 {
        let fam = build_family(n).unwrap();
        for d in 1..n {
            let v = structural_validate(&fam, d, 10, &mut rng).unwrap();
            assert!(v.holds(), "n={n} d={d}");
        }
    }
    assert!(build_family(1).is_err());
    assert!(build_family(9).is_err());
}

/// Every upper unitriangular `m × m` matrix over `GF(2)`.
fn unitriangular_gf2(m: usize) -> Vec<Matrix> {
    let slots: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    (0..1u32 << slots.len())
        .map(|bits| {
            let mut x = Matrix::identity(m);
            for (k, &(i, j)) in slots.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    x.set(i, j, Gf4::ONE);
                }
            }
            x
        })
        .collect()
}

#[test]
fn unitriangular_groups_match_enumeration() {
    for m in 2..=4 {
        let u = unitriangular_group(m, 2).unwrap();
        let all = unitriangular_gf2(m);
        assert_eq!(u.order(), BigUint::from(all.len()));
        assert!(all.iter().all(|x| u.contains(x)));
    }
    let u3 = unitriangular_group(3, 2).unwrap();
    let orders: Vec<BigUint> = lower_central_series(&u3, 4).orders();
    assert_eq!(orders[..3], [8u32, 2, 1].map(BigUint::from));
    assert_eq!(lower_central_series(&u3, 4).class_or_length, Some(2));
    assert!(unitriangular_group(3, 3).is_err());
}

#[test]
fn counterexample_witnesses() {
    let config = ChainConfig::default();
    let w = counterexample_search(10, 3, 3, config).unwrap().unwrap();
    assert!(recheck_witness(&w, config).unwrap());
    // Brute force for the smallest witness: H = U_3(2), K = H' = Z(H).
    assert_eq!((w.m, w.d, w.t), (3, 1, 2));
    let h: HashSet<Matrix> = unitriangular_gf2(3).into_iter().collect();
    let k = commutator_set(&Matrix::identity(3), &h, &h);
    assert_eq!(k.len(), 2);
    assert_eq!(commutator_set(&Matrix::identity(3), &h, &k).len(), 1);
    for d in 1..=3 {
        let w = counterexample_for_d(d, 10, 3, config).unwrap().unwrap();
        assert_eq!(w.d, d);
        assert!(recheck_witness(&w, config).unwrap());
    }
}
