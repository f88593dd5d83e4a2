//! Test corpus and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use sdp_core::matrix::matrix_to_perm;
use sdp_core::{GroupElement, GroupHandle, Permutation};

/// Permutation from 1-based cycles.
pub fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
    let zero: Vec<Vec<u32>> = cycles
        .iter()
        .map(|c| c.iter().map(|p| p - 1).collect())
        .collect();
    let refs: Vec<&[u32]> = zero.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(degree, &refs).unwrap()
}

pub fn group(degree: usize, gens: Vec<Permutation>) -> GroupHandle<Permutation> {
    GroupHandle::new(Permutation::identity(degree), gens)
}

pub fn symmetric(n: usize) -> GroupHandle<Permutation> {
    let all: Vec<u32> = (1..=n as u32).collect();
    group(n, vec![perm(n, &[&[1, 2]]), perm(n, &[&all])])
}

pub fn alternating(n: usize) -> GroupHandle<Permutation> {
    let gens = (3..=n as u32).map(|k| perm(n, &[&[1, 2, k]])).collect();
    group(n, gens)
}

pub fn a5() -> GroupHandle<Permutation> {
    alternating(5)
}

pub fn klein_four() -> GroupHandle<Permutation> {
    group(
        4,
        vec![perm(4, &[&[1, 2], &[3, 4]]), perm(4, &[&[1, 3], &[2, 4]])],
    )
}

pub fn dihedral8() -> GroupHandle<Permutation> {
    group(4, vec![perm(4, &[&[1, 2, 3, 4]]), perm(4, &[&[1, 3]])])
}

pub fn s3() -> GroupHandle<Permutation> {
    symmetric(3)
}

pub fn a3() -> GroupHandle<Permutation> {
    group(3, vec![perm(3, &[&[1, 2, 3]])])
}

/// Quaternion group acting regularly on 8 points.
pub fn quaternion() -> GroupHandle<Permutation> {
    group(
        8,
        vec![
            perm(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]),
            perm(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]]),
        ],
    )
}

/// PSL(2,7) on the 7 points of the Fano plane.
pub fn psl27() -> GroupHandle<Permutation> {
    group(
        7,
        vec![
            perm(7, &[&[1, 2, 3, 4, 5, 6, 7]]),
            perm(7, &[&[2, 3, 5], &[4, 7, 6]]),
            perm(7, &[&[1, 2], &[3, 6]]),
        ],
    )
}

/// S4 wr C2 on 8 points.
pub fn s4_wreath_c2() -> GroupHandle<Permutation> {
    group(
        8,
        vec![
            perm(8, &[&[1, 2]]),
            perm(8, &[&[1, 2, 3, 4]]),
            perm(8, &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]),
        ],
    )
}

/// SL(2,4) ≅ A5 acting on the 16 vectors of GF(4)².
pub fn sl2_on_vectors() -> GroupHandle<Permutation> {
    let gens = sdp_core::families::sl2_group().generators().to_vec();
    matrix_to_perm(&gens, 2).unwrap()
}

/// Named permutation groups of order at most 5000 with their orders.
pub fn corpus() -> Vec<(&'static str, GroupHandle<Permutation>, u64)> {
    vec![
        ("S3", s3(), 6),
        ("A3", a3(), 3),
        ("V4", klein_four(), 4),
        ("D8", dihedral8(), 8),
        ("Q8", quaternion(), 8),
        ("A4", alternating(4), 12),
        ("S4", symmetric(4), 24),
        ("A5", a5(), 60),
        ("S5", symmetric(5), 120),
        ("PSL(2,7)", psl27(), 168),
        ("A6", alternating(6), 360),
        ("S6", symmetric(6), 720),
        ("S4 wr C2", s4_wreath_c2(), 1152),
        ("A7", alternating(7), 2520),
        ("SL(2,4) on 16 points", sl2_on_vectors(), 60),
    ]
}

/// All elements reachable from the identity by right multiplication with
/// generators.
pub fn closure<E: GroupElement>(identity: &E, gens: &[E]) -> HashSet<E> {
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// `[A, B]` from all element pairs.
pub fn commutator_set<E: GroupElement>(identity: &E, a: &HashSet<E>, b: &HashSet<E>) -> HashSet<E> {
    let comms: Vec<E> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.comm(y)))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    closure(identity, &comms)
}

pub fn as_set<E: GroupElement>(g: &GroupHandle<E>) -> HashSet<E> {
    closure(g.identity(), g.generators())
}

pub fn subset_of<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> bool {
    a.iter().all(|x| b.contains(x))
}
