//! Γ_k, peeling and quotient classes against brute-force enumeration of the
//! ambient power.

mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use sdp_core::gamma::{peel_membership, theorem1_check, GammaSpec};
use sdp_core::group::commutator_group;
use sdp_core::series::{gamma, iterated_commutator};
use sdp_core::{GroupElement, GroupHandle, Permutation, ProductElement};

type Prod = ProductElement<Permutation>;

/// Factor group sets: `[G,ʲN]` and `γ_j(N)` for `j ≤ d`, by enumeration.
struct BruteFactors {
    iterated: Vec<HashSet<Permutation>>,
    lower: Vec<HashSet<Permutation>>,
}

fn brute_factors(
    g: &GroupHandle<Permutation>,
    n: &GroupHandle<Permutation>,
    d: usize,
) -> BruteFactors {
    let id = g.identity();
    let gs = as_set(g);
    let ns = as_set(n);
    let mut iterated = vec![gs];
    let mut lower = vec![HashSet::new(), ns.clone()];
    for j in 1..=d {
        let next = commutator_set(id, &iterated[j - 1], &ns);
        iterated.push(next);
        if j >= 2 {
            let next = commutator_set(id, &lower[j - 1], &ns);
            lower.push(next);
        }
    }
    BruteFactors { iterated, lower }
}

/// Γ_k from its definition: Δ_A(u) for every element u of every factor.
fn brute_gamma(
    identity: &Permutation,
    factors: &BruteFactors,
    d: usize,
    k: usize,
) -> HashSet<Prod> {
    let coords = 1usize << d;
    let mut gens = Vec::new();
    for a in 0..coords {
        let size = (a as u32).count_ones() as usize;
        let factor = if size < k {
            &factors.iterated[size]
        } else {
            &factors.lower[size]
        };
        for u in factor {
            let comps = (0..coords)
                .map(|b| {
                    if b & a == a {
                        u.clone()
                    } else {
                        identity.clone()
                    }
                })
                .collect();
            gens.push(ProductElement::new(comps));
        }
    }
    closure(&ProductElement::identity(identity, coords), &gens)
}

/// Every element of `G^coords`.
fn power(elements: &[Permutation], coords: usize) -> Vec<Prod> {
    let mut out: Vec<Vec<Permutation>> = vec![Vec::new()];
    for _ in 0..coords {
        let mut next = Vec::new();
        for p in &out {
            for x in elements {
                let mut q = p.clone();
                q.push(x.clone());
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter().map(ProductElement::new).collect()
}

fn pairs() -> Vec<(
    &'static str,
    GroupHandle<Permutation>,
    GroupHandle<Permutation>,
)> {
    vec![
        ("(S3,S3)", s3(), s3()),
        ("(S3,A3)", s3(), a3()),
        ("(D8,D8)", dihedral8(), dihedral8()),
        (
            "(D8,V4)",
            dihedral8(),
            group(4, vec![perm(4, &[&[1, 3]]), perm(4, &[&[2, 4]])]),
        ),
        ("(Q8,Q8)", quaternion(), quaternion()),
        ("(A4,V4)", alternating(4), klein_four()),
    ]
}

#[test]
fn gamma_orders_and_peeling_match_enumeration() {
    for (name, g, n) in pairs() {
        for d in 1..=2 {
            let coords = 1usize << d;
            let elements: Vec<Permutation> = as_set(&g).into_iter().collect();
            if elements.len().pow(coords as u32) > 20_000 {
                continue;
            }
            let ambient = power(&elements, coords);
            let factors = brute_factors(&g, &n, d);
            for k in 1..=d + 1 {
                let brute = brute_gamma(g.identity(), &factors, d, k);
                let spec = GammaSpec::new(&g, &n, d, k).unwrap();
                let chain = spec.group();
                assert_eq!(
                    chain.order(),
                    BigUint::from(brute.len()),
                    "{name} d={d} k={k}"
                );
                for x in &ambient {
                    let expected = brute.contains(x);
                    assert_eq!(
                        peel_membership(x, &spec),
                        expected,
                        "{name} d={d} k={k} {x:?}"
                    );
                    assert_eq!(chain.contains(x), expected, "{name} d={d} k={k}");
                }
            }
        }
    }
}

#[test]
fn gamma_decreases_in_k() {
    for (name, g, n) in pairs() {
        for d in 1..=2 {
            let factors = brute_factors(&g, &n, d);
            for k in 1..=d {
                let upper = brute_gamma(g.identity(), &factors, d, k);
                let lower = brute_gamma(g.identity(), &factors, d, k + 1);
                assert!(subset_of(&lower, &upper), "{name} d={d} k={k}");
            }
        }
    }
}

/// `[γ_k(N), γ_l(N)] ≤ γ_{k+l}(N)` and `[[G,ᵐN], γ_l(N)] ≤ [G,ᵐ⁺ˡN]`.
#[test]
fn commutator_calculus_facts() {
    let mut cases: Vec<(String, GroupHandle<Permutation>, GroupHandle<Permutation>)> = Vec::new();
    for (name, g, order) in corpus() {
        if order > 1200 {
            continue;
        }
        let derived = commutator_group(&g, &g);
        cases.push((format!("({name},{name})"), g.clone(), g.clone()));
        cases.push((format!("({name},{name}')"), g, derived));
    }
    cases.push((
        "(D8,V4)".into(),
        dihedral8(),
        group(4, vec![perm(4, &[&[1, 3]]), perm(4, &[&[2, 4]])]),
    ));
    for (name, g, n) in cases {
        for k in 1..=3 {
            for l in 1..=3 {
                let c = commutator_group(&gamma(&n, k), &gamma(&n, l));
                let target = gamma(&n, k + l);
                assert!(
                    c.generators().iter().all(|x| target.contains(x)),
                    "{name} C1 k={k} l={l}"
                );
            }
        }
        for m in 0..=3 {
            for l in 1..=3 {
                let c = commutator_group(&iterated_commutator(&g, &n, m), &gamma(&n, l));
                let target = iterated_commutator(&g, &n, m + l);
                assert!(
                    c.generators().iter().all(|x| target.contains(x)),
                    "{name} C2 m={m} l={l}"
                );
            }
        }
    }
}

#[test]
fn iterated_commutators_match_enumeration() {
    for (name, g, n) in pairs() {
        let factors = brute_factors(&g, &n, 3);
        for j in 0..=3 {
            let chain = iterated_commutator(&g, &n, j);
            assert_eq!(
                chain.order(),
                BigUint::from(factors.iterated[j].len()),
                "{name} j={j}"
            );
            if j >= 1 {
                let lower = gamma(&n, j);
                assert_eq!(
                    lower.order(),
                    BigUint::from(factors.lower[j].len()),
                    "{name} j={j}"
                );
            }
        }
    }
}

/// `S` and `N` as element sets, with the generators of `S` and the
/// elements whose normal closure is `N`.
struct RandomPair {
    s: HashSet<Prod>,
    s_gens: Vec<Prod>,
    n: HashSet<Prod>,
    n_seeds: Vec<Prod>,
}

/// A random subdirect `S ≤ ∏ factors` and a normal subdirect `N ≤ S`, or
/// `None` when the draw is not subdirect.
fn random_pair(factors: &[GroupHandle<Permutation>], rng: &mut ChaCha8Rng) -> Option<RandomPair> {
    let sets: Vec<Vec<Permutation>> = factors
        .iter()
        .map(|f| as_set(f).into_iter().collect())
        .collect();
    let pick = |rng: &mut ChaCha8Rng| {
        ProductElement::new(
            sets.iter()
                .map(|s| s[rng.gen_range(0..s.len())].clone())
                .collect(),
        )
    };
    let identity = ProductElement::new(factors.iter().map(|f| f.identity().clone()).collect());
    let s_gens: Vec<Prod> = (0..rng.gen_range(2..=3)).map(|_| pick(rng)).collect();
    let s = closure(&identity, &s_gens);
    let subdirect = |set: &HashSet<Prod>| {
        (0..factors.len()).all(|c| {
            set.iter()
                .map(|x| x.components()[c].clone())
                .collect::<HashSet<_>>()
                .len()
                == sets[c].len()
        })
    };
    if !subdirect(&s) {
        return None;
    }
    let s_list: Vec<Prod> = s.iter().cloned().collect();
    let seeds: Vec<Prod> = (0..rng.gen_range(1..=2))
        .map(|_| s_list[rng.gen_range(0..s_list.len())].clone())
        .collect();
    let conjugates: Vec<Prod> = seeds
        .iter()
        .flat_map(|x| s_list.iter().map(move |g| x.conj(g)))
        .collect();
    let n = closure(&identity, &conjugates);
    if !subdirect(&n) {
        return None;
    }
    Some(RandomPair {
        s,
        s_gens,
        n,
        n_seeds: seeds,
    })
}

/// Brute-force class of `S/N`: smallest `c` with `γ_{c+1}(S) ⊆ N`.
fn brute_class(identity: &Prod, s: &HashSet<Prod>, n: &HashSet<Prod>) -> Option<usize> {
    let mut term = s.clone();
    for c in 0..8 {
        if subset_of(&term, n) {
            return Some(c);
        }
        term = commutator_set(identity, &term, s);
    }
    None
}

#[test]
fn quotient_class_bound_on_random_subdirect_pairs() {
    let families: Vec<Vec<GroupHandle<Permutation>>> = vec![
        vec![s3(), s3()],
        vec![s3(), s3(), s3()],
        vec![dihedral8(), dihedral8()],
        vec![s3(), dihedral8()],
        vec![quaternion(), dihedral8()],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut nontrivial = 0;
    while checked < 60 {
        let factors = &families[checked % families.len()];
        let Some(RandomPair {
            s,
            s_gens,
            n,
            n_seeds,
        }) = random_pair(factors, &mut rng)
        else {
            continue;
        };
        let identity = ProductElement::new(factors.iter().map(|f| f.identity().clone()).collect());
        let expected = brute_class(&identity, &s, &n).unwrap();
        assert!(
            expected < factors.len(),
            "class of S/N below the number of factors"
        );
        let s_handle = GroupHandle::new(identity.clone(), s_gens);
        let n_handle = sdp_core::group::normal_closure(&s_handle, &n_seeds);
        assert_eq!(n_handle.order(), BigUint::from(n.len()));
        let report = theorem1_check(&s_handle, &n_handle, factors, 8).unwrap();
        assert!(report.holds());
        assert_eq!(report.class, Some(expected));
        nontrivial += (expected > 0) as usize;
        checked += 1;
    }
    assert!(nontrivial > 0, "every sampled quotient was trivial");
}

#[test]
fn class_check_rejects_non_subdirect_input() {
    let g = s3();
    let id = ProductElement::identity(g.identity(), 2);
    let s = GroupHandle::new(
        id.clone(),
        g.generators()
            .iter()
            .map(|x| ProductElement::new(vec![x.clone(), x.clone()]))
            .collect(),
    );
    let first_only = GroupHandle::new(
        id,
        g.generators()
            .iter()
            .map(|x| ProductElement::embed(x, 0, 2).unwrap())
            .collect(),
    );
    assert!(theorem1_check(&s, &first_only, &[g.clone(), g], 8).is_err());
}
