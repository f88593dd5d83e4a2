//! Lower central series, derived series, iterated commutators `[G, N, …, N]`
//! and nilpotency certificates.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::group::{commutator_group, GroupHandle};

pub const DEFAULT_CLASS_BOUND: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    IteratedCommutator,
}

#[derive(Clone, Debug)]
pub struct SeriesTerm<E: GroupElement> {
    pub index: usize,
    pub group: GroupHandle<E>,
    pub order: BigUint,
}

/// A computed series. `class_or_length` is the nilpotency class (lower
/// central) or derived length once the series reaches the trivial group.
#[derive(Clone, Debug)]
pub struct SeriesReport<E: GroupElement> {
    pub kind: SeriesKind,
    pub terms: Vec<SeriesTerm<E>>,
    pub stabilized: bool,
    pub class_or_length: Option<usize>,
}

impl<E: GroupElement> SeriesReport<E> {
    pub fn orders(&self) -> Vec<BigUint> {
        self.terms.iter().map(|t| t.order.clone()).collect()
    }

    pub fn term(&self, index: usize) -> Option<&GroupHandle<E>> {
        self.terms
            .iter()
            .find(|t| t.index == index)
            .map(|t| &t.group)
    }

    pub fn summary(&self) -> SeriesSummary {
        SeriesSummary {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|t| TermSummary {
                    index: t.index,
                    order: t.order.to_string(),
                })
                .collect(),
            stabilized: self.stabilized,
            class_or_length: self.class_or_length,
        }
    }
}

/// Serializable form of a [`SeriesReport`]; orders are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub kind: SeriesKind,
    pub terms: Vec<TermSummary>,
    pub stabilized: bool,
    pub class_or_length: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSummary {
    pub index: usize,
    pub order: String,
}

fn term<E: GroupElement>(index: usize, group: GroupHandle<E>) -> SeriesTerm<E> {
    let order = group.order();
    SeriesTerm {
        index,
        group,
        order,
    }
}

/// Runs `next` from `first` until the terms stop shrinking, reach the
/// trivial group, or `max_terms` terms exist.
fn descend<E, F>(
    kind: SeriesKind,
    first: GroupHandle<E>,
    first_index: usize,
    max_terms: usize,
    mut next: F,
) -> SeriesReport<E>
where
    E: GroupElement,
    F: FnMut(&GroupHandle<E>) -> GroupHandle<E>,
{
    let mut terms = vec![term(first_index, first)];
    let mut stabilized = false;
    let mut class_or_length = None;
    loop {
        let last = terms.last().expect("series has a first term");
        if last.group.is_trivial() {
            stabilized = true;
            class_or_length = Some(last.index - first_index);
            break;
        }
        if terms.len() >= max_terms {
            break;
        }
        let following = term(last.index + 1, next(&last.group));
        // nested by construction; equal orders plus containment means equal
        if following.order == last.order && last.group.is_subgroup_of(&following.group) {
            stabilized = true;
            break;
        }
        terms.push(following);
    }
    SeriesReport {
        kind,
        terms,
        stabilized,
        class_or_length,
    }
}

/// `γ_1 = G`, `γ_{k+1} = [γ_k, G]`, up to `max_k` terms.
pub fn lower_central_series<E: GroupElement>(g: &GroupHandle<E>, max_k: usize) -> SeriesReport<E> {
    descend(
        SeriesKind::LowerCentral,
        g.clone(),
        1,
        max_k.max(1),
        |term| commutator_group(term, g),
    )
}

/// `G^(0) = G`, `G^(i+1) = [G^(i), G^(i)]`, up to `max_terms` terms.
pub fn derived_series<E: GroupElement>(g: &GroupHandle<E>, max_terms: usize) -> SeriesReport<E> {
    descend(
        SeriesKind::Derived,
        g.clone(),
        0,
        max_terms.max(1),
        |term| commutator_group(term, term),
    )
}

pub fn derived_subgroup<E: GroupElement>(g: &GroupHandle<E>) -> GroupHandle<E> {
    commutator_group(g, g)
}

pub fn is_perfect<E: GroupElement>(g: &GroupHandle<E>) -> bool {
    derived_subgroup(g).order() == g.order()
}

/// Errors unless `g` is perfect.
pub fn ensure_perfect<E: GroupElement>(g: &GroupHandle<E>) -> Result<()> {
    let derived = derived_subgroup(g).order();
    let order = g.order();
    if derived == order {
        Ok(())
    } else {
        Err(Error::NotPerfect {
            order: order.to_string(),
            derived: derived.to_string(),
        })
    }
}

/// `γ_k(G)`, `k ≥ 1`.
pub fn gamma<E: GroupElement>(g: &GroupHandle<E>, k: usize) -> GroupHandle<E> {
    assert!(k >= 1, "lower central series starts at index 1");
    let mut term = g.clone();
    for _ in 1..k {
        if term.is_trivial() {
            break;
        }
        term = commutator_group(&term, g);
    }
    term
}

/// `[G, ⁰N] = G`, `[G, ᵏ⁺¹N] = [[G, ᵏN], N]` for `k = 0..=d`, after checking
/// that `N` is normal in `G`.
pub fn iterated_commutator_chain<E: GroupElement>(
    g: &GroupHandle<E>,
    n: &GroupHandle<E>,
    d: usize,
) -> Result<SeriesReport<E>> {
    n.ensure_normal_in(g)?;
    let mut terms = vec![term(0, g.clone())];
    let mut stabilized = false;
    for k in 1..=d {
        let prev = &terms[k - 1];
        if prev.group.is_trivial() {
            stabilized = true;
            terms.push(term(k, prev.group.clone()));
            continue;
        }
        let next = commutator_group(&prev.group, n);
        terms.push(term(k, next));
    }
    Ok(SeriesReport {
        kind: SeriesKind::IteratedCommutator,
        terms,
        stabilized,
        class_or_length: None,
    })
}

/// `[G, ᵈN]` without the normality check.
pub fn iterated_commutator<E: GroupElement>(
    g: &GroupHandle<E>,
    n: &GroupHandle<E>,
    d: usize,
) -> GroupHandle<E> {
    let mut term = g.clone();
    for _ in 0..d {
        if term.is_trivial() {
            break;
        }
        term = commutator_group(&term, n);
    }
    term
}

/// Smallest `c ≥ 0` with `γ_{c+1}(S) ≤ N`, or `None` if no `c ≤ bound` works.
pub fn quotient_nilpotency_class<E: GroupElement>(
    s: &GroupHandle<E>,
    n: &GroupHandle<E>,
    bound: usize,
) -> Option<usize> {
    let mut term = s.clone();
    for c in 0..=bound {
        if term.is_subgroup_of(n) {
            return Some(c);
        }
        let next = commutator_group(&term, s);
        if next.order() == term.order() {
            return None;
        }
        term = next;
    }
    None
}

/// Result of comparing `γ_d(N)` with `[G, ᵈN]`.
#[derive(Clone, Debug)]
pub struct GapReport<E: GroupElement> {
    pub d: usize,
    pub gamma_order: BigUint,
    pub iterated_order: BigUint,
    /// `[G, ᵈN] ≤ γ_d(N)`, by generator membership.
    pub nested: bool,
    pub strict: bool,
    /// A generator of `γ_d(N)` outside `[G, ᵈN]` when the gap is strict.
    pub witness: Option<E>,
}

/// Decides `γ_d(N) > [G, ᵈN]` for `d ≥ 1`.
pub fn strict_gap<E: GroupElement>(
    g: &GroupHandle<E>,
    n: &GroupHandle<E>,
    d: usize,
) -> Result<GapReport<E>> {
    if d == 0 {
        return Err(Error::InvalidParameter("strict_gap needs d >= 1".into()));
    }
    n.ensure_normal_in(g)?;
    let gamma_n = gamma(n, d);
    let iterated = iterated_commutator(g, n, d);
    let nested = iterated.is_subgroup_of(&gamma_n);
    let witness = gamma_n
        .generators()
        .iter()
        .find(|x| !iterated.contains(x))
        .cloned();
    let (gamma_order, iterated_order) = (gamma_n.order(), iterated.order());
    Ok(GapReport {
        d,
        strict: nested && gamma_order > iterated_order && witness.is_some(),
        gamma_order,
        iterated_order,
        nested,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Permutation;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn a5() -> GroupHandle<Permutation> {
        GroupHandle::new(
            Permutation::identity(5),
            vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[0, 1, 2, 3, 4]])],
        )
    }

    fn s4() -> GroupHandle<Permutation> {
        GroupHandle::new(
            Permutation::identity(4),
            vec![perm(4, &[&[0, 1]]), perm(4, &[&[0, 1, 2, 3]])],
        )
    }

    // D_8 acting on the square's vertices: isomorphic to U_3(F_2)
    fn d8() -> GroupHandle<Permutation> {
        GroupHandle::new(
            Permutation::identity(4),
            vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[1, 3]])],
        )
    }

    #[test]
    fn perfect_group_series_is_constant() {
        let lcs = lower_central_series(&a5(), 5);
        assert!(lcs.stabilized);
        assert_eq!(lcs.class_or_length, None);
        assert_eq!(lcs.orders(), vec![BigUint::from(60u32)]);
        assert!(is_perfect(&a5()));
        let der = derived_series(&a5(), 5);
        assert_eq!(der.orders(), vec![BigUint::from(60u32)]);
    }

    #[test]
    fn dihedral_eight_has_class_two() {
        let lcs = lower_central_series(&d8(), 10);
        let orders: Vec<u32> = lcs.orders().iter().map(|o| o.try_into().unwrap()).collect();
        assert_eq!(orders, vec![8, 2, 1]);
        assert_eq!(lcs.class_or_length, Some(2));
    }

    #[test]
    fn abelian_group_has_class_one_and_is_not_perfect() {
        let c = GroupHandle::new(Permutation::identity(5), vec![perm(5, &[&[0, 1, 2, 3, 4]])]);
        assert_eq!(lower_central_series(&c, 4).class_or_length, Some(1));
        assert!(!is_perfect(&c));
        assert!(ensure_perfect(&c).is_err());
    }

    #[test]
    fn s4_derived_series() {
        let der = derived_series(&s4(), 10);
        let orders: Vec<u32> = der.orders().iter().map(|o| o.try_into().unwrap()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert_eq!(der.class_or_length, Some(3));
    }

    #[test]
    fn iterated_commutators_in_s4() {
        let g = s4();
        let v4 = GroupHandle::new(
            Permutation::identity(4),
            vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])],
        );
        let chain = iterated_commutator_chain(&g, &v4, 2).unwrap();
        let orders: Vec<u32> = chain
            .orders()
            .iter()
            .map(|o| o.try_into().unwrap())
            .collect();
        // [S4, V4] = V4 and [V4, V4] = 1
        assert_eq!(orders, vec![24, 4, 1]);
        assert!(chain.term(0).unwrap().same_group(&g));
        let not_normal = GroupHandle::new(Permutation::identity(4), vec![perm(4, &[&[0, 1]])]);
        assert!(matches!(
            iterated_commutator_chain(&g, &not_normal, 1),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn quotient_classes() {
        let g = s4();
        assert_eq!(quotient_nilpotency_class(&g, &g, 16), Some(0));
        let a4 = derived_subgroup(&g);
        assert_eq!(quotient_nilpotency_class(&g, &a4, 16), Some(1));
        // S4 / V4 = S3 is not nilpotent
        let v4 = derived_subgroup(&a4);
        assert_eq!(quotient_nilpotency_class(&g, &v4, 16), None);
        let d = d8();
        let trivial = GroupHandle::trivial(Permutation::identity(4));
        assert_eq!(quotient_nilpotency_class(&d, &trivial, 16), Some(2));
        assert_eq!(quotient_nilpotency_class(&d, &trivial, 1), None);
    }

    #[test]
    fn no_gap_for_perfect_n_equal_g() {
        let g = a5();
        let gap = strict_gap(&g, &g, 1).unwrap();
        assert!(!gap.strict);
        assert_eq!(gap.gamma_order, gap.iterated_order);
        assert!(strict_gap(&g, &g, 0).is_err());
    }
}
