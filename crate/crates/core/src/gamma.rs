//! The subdirect subgroups `Γ_k(G, N) ≤ G^{2^d}`.
//!
//! Coordinates of the direct power are indexed by subsets of `[d]` (mask
//! value = coordinate). `Δ_A(u)` carries `u` at every `B ⊇ A`, and
//!
//! ```text
//! Γ_k = ∏_{|A| < k} Δ_A([G, ^{|A|}N]) · ∏_{|A| ≥ k} Δ_A(γ_{|A|}(N))
//! ```
//!
//! with factors in short-lex order. `Γ_k` is handled as the subgroup
//! generated by the factors; [`peel_membership`] decides membership in the
//! set product one coordinate at a time.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainConfig, StabilizerChain};
use crate::element::{GroupElement, Permutation, ProductElement};
use crate::error::{Error, Result};
use crate::families::{self, Member};
use crate::group::{commutator_group, GraphHom, GroupHandle, MembershipOracle};
use crate::matrix::Matrix;
use crate::series::{ensure_perfect, gamma, quotient_nilpotency_class};
use crate::subset::{all_shortlex, SubsetIndex};

/// Largest `d` accepted by [`GammaSpec`]; `2^d` coordinates are materialized.
pub const MAX_GAMMA_D: usize = 10;

/// `Δ_A(u)`.
pub fn delta<E: GroupElement>(a: SubsetIndex, u: &E) -> ProductElement<E> {
    let one = u.identity_like();
    ProductElement::new(
        (0..1u32 << a.d())
            .map(|b| {
                if a.mask() & !b == 0 {
                    u.clone()
                } else {
                    one.clone()
                }
            })
            .collect(),
    )
}

/// The group placed at a subset: `[G, ʲN]` or `γ_j(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Iterated(usize),
    LowerCentral(usize),
}

impl FactorKind {
    /// Factor of a subset of size `size` in `Γ_k`.
    pub fn for_subset(size: usize, k: usize) -> FactorKind {
        if size < k {
            FactorKind::Iterated(size)
        } else {
            FactorKind::LowerCentral(size)
        }
    }

    /// The matching structural predicate of the SL(2n,4) family.
    pub fn member(self) -> Member {
        match self {
            FactorKind::Iterated(0) => Member::G,
            FactorKind::Iterated(j) => Member::IteratedCommutator(j),
            FactorKind::LowerCentral(j) => Member::LowerCentral(j),
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::Iterated(j) => write!(f, "[G,{j}N]"),
            FactorKind::LowerCentral(j) => write!(f, "gamma_{j}(N)"),
        }
    }
}

/// `Γ_k(G, N)` over `[d]`, with its factor groups.
#[derive(Clone, Debug)]
pub struct GammaSpec<E: GroupElement> {
    pub g: GroupHandle<E>,
    pub n: GroupHandle<E>,
    pub d: usize,
    pub k: usize,
    factors: BTreeMap<FactorKind, GroupHandle<E>>,
}

impl<E: GroupElement> GammaSpec<E> {
    /// Computes the factors with the series engine after checking `N ⊴ G`
    /// and `1 ≤ k ≤ d + 1`.
    pub fn new(g: &GroupHandle<E>, n: &GroupHandle<E>, d: usize, k: usize) -> Result<Self> {
        if d == 0 || d > MAX_GAMMA_D {
            return Err(Error::InvalidParameter(format!(
                "d = {d} outside 1..={MAX_GAMMA_D}"
            )));
        }
        if k == 0 || k > d + 1 {
            return Err(Error::InvalidParameter(format!(
                "k = {k} outside 1..={}",
                d + 1
            )));
        }
        n.ensure_normal_in(g)?;
        let mut factors = BTreeMap::new();
        let mut iterated = g.clone();
        for j in 0..k.min(d + 1) {
            if j > 0 {
                iterated = commutator_group(&iterated, n);
            }
            factors.insert(FactorKind::Iterated(j), iterated.clone());
        }
        let mut lower = n.clone();
        for j in 1..=d {
            if j > 1 {
                lower = commutator_group(&lower, n);
            }
            if j >= k {
                factors.insert(FactorKind::LowerCentral(j), lower.clone());
            }
        }
        Ok(GammaSpec {
            g: g.clone(),
            n: n.clone(),
            d,
            k,
            factors,
        })
    }

    /// Replaces factor membership by the given oracles, where provided.
    pub fn with_factor_oracles(
        mut self,
        oracle: impl Fn(FactorKind) -> Option<MembershipOracle<E>>,
    ) -> Self {
        for (kind, group) in self.factors.iter_mut() {
            if let Some(o) = oracle(*kind) {
                *group = group.clone().with_oracle(o);
            }
        }
        self
    }

    pub fn coordinates(&self) -> usize {
        1 << self.d
    }

    pub fn subsets(&self) -> Vec<SubsetIndex> {
        all_shortlex(self.d)
    }

    pub fn factor_kind(&self, a: SubsetIndex) -> FactorKind {
        FactorKind::for_subset(a.len(), self.k)
    }

    pub fn factor(&self, a: SubsetIndex) -> &GroupHandle<E> {
        &self.factors[&self.factor_kind(a)]
    }

    pub fn factors(&self) -> &BTreeMap<FactorKind, GroupHandle<E>> {
        &self.factors
    }

    pub fn identity(&self) -> ProductElement<E> {
        ProductElement::identity(self.g.identity(), self.coordinates())
    }

    /// `(A, u)` for every factor generator `u`, in short-lex order of `A`.
    pub fn labelled_generators(&self) -> Vec<(SubsetIndex, E)> {
        self.subsets()
            .into_iter()
            .flat_map(|a| {
                self.factor(a)
                    .generators()
                    .iter()
                    .map(move |u| (a, u.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// `Δ_A(u)` over all subsets `A` and generators `u` of the `A`-factor.
    pub fn generators(&self) -> Vec<ProductElement<E>> {
        self.labelled_generators()
            .into_iter()
            .map(|(a, u)| delta(a, &u))
            .collect()
    }

    pub fn group(&self) -> GroupHandle<ProductElement<E>> {
        GroupHandle::new(self.identity(), self.generators())
            .with_config(*self.g.config())
            .with_label(format!("Gamma_{}(d={})", self.k, self.d))
    }
}

/// Outcome of peeling an element against `Γ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peel<E> {
    pub accepted: bool,
    /// First subset whose coordinate fell outside its factor.
    pub rejected_at: Option<SubsetIndex>,
    /// `u_A` with `x = ∏ Δ_A(u_A)` in short-lex order, when accepted.
    pub factors: Vec<(SubsetIndex, E)>,
}

/// Divides `x` by `Δ_A(u)` in short-lex order, where `u` is the current
/// coordinate at `A`. Later factors never touch coordinate `A`, so `u` must
/// lie in the `A`-factor.
pub fn peel<E: GroupElement>(x: &ProductElement<E>, spec: &GammaSpec<E>) -> Peel<E> {
    let mut residue = x.clone();
    let mut factors = Vec::new();
    if x.len() != spec.coordinates() {
        return Peel {
            accepted: false,
            rejected_at: None,
            factors,
        };
    }
    for a in spec.subsets() {
        let u = residue.components()[a.index()].clone();
        if !spec.factor(a).contains_structural(&u) {
            return Peel {
                accepted: false,
                rejected_at: Some(a),
                factors: Vec::new(),
            };
        }
        if !u.is_identity() {
            residue = delta(a, &u).inv().mul(&residue);
            factors.push((a, u));
        }
    }
    let accepted = residue.is_identity();
    Peel {
        accepted,
        rejected_at: None,
        factors: if accepted { factors } else { Vec::new() },
    }
}

pub fn peel_membership<E: GroupElement>(x: &ProductElement<E>, spec: &GammaSpec<E>) -> bool {
    peel(x, spec).accepted
}

/// The projection of `s` onto `coordinate` generates all of `factor`.
pub fn is_subdirect<E: GroupElement>(
    s: &GroupHandle<ProductElement<E>>,
    factor: &GroupHandle<E>,
    coordinate: usize,
) -> Result<bool> {
    let len = s.identity().len();
    if coordinate >= len {
        return Err(Error::SubsetOutOfRange {
            index: coordinate,
            len,
        });
    }
    let projected: Vec<E> = s
        .generators()
        .iter()
        .map(|x| x.components()[coordinate].clone())
        .collect();
    let image = GroupHandle::new(factor.identity().clone(), projected).with_config(*s.config());
    Ok(image.is_subgroup_of(factor) && image.order() == factor.order())
}

/// Errors with the first coordinate whose projection is not onto.
pub fn ensure_subdirect<E: GroupElement>(
    s: &GroupHandle<ProductElement<E>>,
    factors: &[GroupHandle<E>],
) -> Result<()> {
    if s.identity().len() != factors.len() {
        return Err(Error::DimensionMismatch {
            expected: factors.len(),
            found: s.identity().len(),
        });
    }
    for (c, f) in factors.iter().enumerate() {
        if !is_subdirect(s, f, c)? {
            return Err(Error::NotSubdirect { coordinate: c });
        }
    }
    Ok(())
}

/// `[Δ_A(x), Δ_B(y)] = Δ_{A∪B}([x, y])`.
pub fn dc_identity_holds<E: GroupElement>(a: SubsetIndex, b: SubsetIndex, x: &E, y: &E) -> bool {
    let Ok(ab) = a.union(&b) else { return false };
    delta(a, x).comm(&delta(b, y)) == delta(ab, &x.comm(y))
}

/// The commutator identity for every pair of subsets of `[d]` and every
/// pair `(x, y)` drawn from `xs × ys`.
pub fn check_dc_identity<E: GroupElement>(d: usize, xs: &[E], ys: &[E]) -> bool {
    let subsets = all_shortlex(d);
    subsets.iter().all(|a| {
        subsets.iter().all(|b| {
            xs.iter()
                .all(|x| ys.iter().all(|y| dc_identity_holds(*a, *b, x, y)))
        })
    })
}

/// The three commutator inclusions between factor groups, checked by
/// generator membership for all subset sizes of `[d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorInclusions {
    pub d: usize,
    /// `[[G,ᵃN], [G,ᵇN]] ≤ [G,ᶜN]`
    pub iterated_iterated: bool,
    /// `[[G,ᵃN], γ_b(N)] ≤ [G,ᶜN]`, `b ≥ 1`
    pub iterated_lower: bool,
    /// `[γ_a(N), γ_b(N)] ≤ γ_c(N)`, `a, b ≥ 1`
    pub lower_lower: bool,
}

impl FactorInclusions {
    pub fn holds(&self) -> bool {
        self.iterated_iterated && self.iterated_lower && self.lower_lower
    }
}

/// Checks [`FactorInclusions`] where `c = |A ∪ B|` ranges over every value
/// attained for subsets of sizes `a`, `b`; the largest such `c` is decisive
/// since both series decrease.
pub fn check_factor_inclusions<E: GroupElement>(
    g: &GroupHandle<E>,
    n: &GroupHandle<E>,
    d: usize,
) -> Result<FactorInclusions> {
    n.ensure_normal_in(g)?;
    let mut iterated = vec![g.clone()];
    let mut lower = vec![g.clone(), n.clone()];
    for j in 1..=d {
        let next = commutator_group(&iterated[j - 1], n);
        iterated.push(next);
        if j >= 2 {
            let next = commutator_group(&lower[j - 1], n);
            lower.push(next);
        }
    }
    let mut report = FactorInclusions {
        d,
        iterated_iterated: true,
        iterated_lower: true,
        lower_lower: true,
    };
    for a in 0..=d {
        for b in 0..=d {
            let c = (a + b).min(d);
            report.iterated_iterated &=
                commutator_group(&iterated[a], &iterated[b]).is_subgroup_of(&iterated[c]);
            if b >= 1 {
                report.iterated_lower &=
                    commutator_group(&iterated[a], &lower[b]).is_subgroup_of(&iterated[c]);
            }
            if a >= 1 && b >= 1 {
                report.lower_lower &=
                    commutator_group(&lower[a], &lower[b]).is_subgroup_of(&lower[c]);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LccRow {
    pub k: usize,
    /// `|γ_k(Γ_1)|`
    pub lcs_order: String,
    /// `|Γ_k|`
    pub gamma_order: String,
    /// Equal orders and mutual generator membership.
    pub equal: bool,
    /// Peeling accepts every generator of `γ_k(Γ_1)`.
    pub peel_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LccReport {
    pub d: usize,
    pub rows: Vec<LccRow>,
}

impl LccReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.equal && r.peel_agrees)
    }
}

/// Compares `γ_k(Γ_1)` with `Γ_k` for `k = 1..=d+1`; `G` must be perfect.
pub fn verify_lcc<E: GroupElement>(
    g: &GroupHandle<E>,
    n: &GroupHandle<E>,
    d: usize,
) -> Result<LccReport> {
    ensure_perfect(g)?;
    let s = GammaSpec::new(g, n, d, 1)?.group();
    let mut term = s.clone();
    let mut rows = Vec::new();
    for k in 1..=d + 1 {
        if k > 1 {
            term = commutator_group(&term, &s);
        }
        let spec = GammaSpec::new(g, n, d, k)?;
        let big = spec.group();
        let (lcs_order, gamma_order) = (term.order(), big.order());
        rows.push(LccRow {
            k,
            equal: lcs_order == gamma_order && term.same_group(&big),
            peel_agrees: term.generators().iter().all(|x| peel_membership(x, &spec)),
            lcs_order: lcs_order.to_string(),
            gamma_order: gamma_order.to_string(),
        });
    }
    Ok(LccReport { d, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub num_factors: usize,
    pub s_order: String,
    pub n_order: String,
    /// `γ_n(S) ≤ N` by generator membership.
    pub lower_central_in_n: bool,
    /// Nilpotency class of `S/N`.
    pub class: Option<usize>,
}

impl Theorem1Report {
    pub fn holds(&self) -> bool {
        self.lower_central_in_n && self.class.is_some_and(|c| c < self.num_factors)
    }
}

/// For `N ⊴ S`, both subdirect in `∏ factors`: certifies `γ_n(S) ≤ N` and
/// computes the class of `S/N`.
pub fn theorem1_check<E: GroupElement>(
    s: &GroupHandle<ProductElement<E>>,
    n: &GroupHandle<ProductElement<E>>,
    factors: &[GroupHandle<E>],
    class_bound: usize,
) -> Result<Theorem1Report> {
    ensure_subdirect(s, factors)?;
    ensure_subdirect(n, factors)?;
    n.ensure_normal_in(s)?;
    let num_factors = factors.len();
    let lower_central_in_n = gamma(s, num_factors.max(1)).is_subgroup_of(n);
    Ok(Theorem1Report {
        num_factors,
        s_order: s.order().to_string(),
        n_order: n.order().to_string(),
        lower_central_in_n,
        class: quotient_nilpotency_class(s, n, class_bound),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub d: usize,
    /// `Δ_{[d]}(w) ∈ Γ_d`.
    pub in_gamma_d: bool,
    /// `Δ_{[d]}(w) ∈ Γ_{d+1}`.
    pub in_gamma_next: bool,
    /// Subset where peeling against `Γ_{d+1}` failed.
    pub rejected_at: Option<String>,
}

impl Theorem2Report {
    /// With `G` perfect, `γ_d(S) = Γ_d` and `γ_{d+1}(S) = Γ_{d+1}`, so a
    /// witness in `Γ_d \ Γ_{d+1}` makes `S/Γ_{d+1}` of class exactly `d`.
    pub fn holds(&self) -> bool {
        self.in_gamma_d && !self.in_gamma_next
    }
}

/// Peels `Δ_{[d]}(w)` against `Γ_d` and `Γ_{d+1}`.
pub fn theorem2_check<E: GroupElement>(
    gamma_d: &GammaSpec<E>,
    gamma_next: &GammaSpec<E>,
    w: &E,
) -> Result<Theorem2Report> {
    let d = gamma_d.d;
    if gamma_next.d != d || gamma_d.k != d || gamma_next.k != d + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected Gamma_{d} and Gamma_{} over [{d}]",
            d + 1
        )));
    }
    let x = delta(SubsetIndex::full(d), w);
    let next = peel(&x, gamma_next);
    Ok(Theorem2Report {
        d,
        in_gamma_d: peel_membership(&x, gamma_d),
        in_gamma_next: next.accepted,
        rejected_at: next.rejected_at.map(|a| a.to_string()),
    })
}

/// `Γ_k` for the SL(2n,4) block family with the closed-form predicates
/// as factor oracles.
pub fn family_gamma_spec(
    blocks: usize,
    d: usize,
    k: usize,
    config: ChainConfig,
) -> Result<GammaSpec<Matrix>> {
    let fam = families::build_family(blocks)?;
    let g = fam.handle(Member::G, config)?;
    let n = fam.handle(Member::N, config)?;
    Ok(GammaSpec::new(&g, &n, d, k)?.with_factor_oracles(|kind| {
        let member = kind.member();
        Some(
            Arc::new(move |x: &Matrix| families::structural_member(blocks, member, x))
                as MembershipOracle<Matrix>,
        )
    }))
}

/// `C ↦ B` meaning `r_i` carries the kernel of the projection onto `C` to
/// the kernel of the projection onto `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelImage {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiReport {
    pub i: usize,
    pub is_homomorphism: bool,
    pub domain_order: String,
    pub graph_order: String,
    /// Images lie in `Γ_1` and generate it.
    pub bijective: bool,
    /// `r_i(r_i(x)) = x` on generators.
    pub involution: bool,
    /// `None` when some coordinate image is not determined uniquely.
    pub kernel_map: Option<Vec<KernelImage>>,
    /// The kernel map is `C ↦ C Δ {i}`.
    pub symmetric_difference: bool,
    #[serde(skip)]
    kernel_perm: Option<Vec<u32>>,
}

impl RiReport {
    pub fn holds(&self) -> bool {
        self.is_homomorphism && self.bijective && self.involution && self.symmetric_difference
    }
}

/// Checks that `Δ_A(u) ↦ Δ_A(u)` for `i ∉ A` and
/// `Δ_A(u) ↦ Δ_{A∖{i}}(u)·Δ_A(u)⁻¹` for `i ∈ A` defines an involutory
/// automorphism of `Γ_1`, and finds the permutation it induces on the
/// projection kernels.
pub fn r_automorphism_check<E: GroupElement>(spec: &GammaSpec<E>, i: usize) -> Result<RiReport> {
    if spec.k != 1 {
        return Err(Error::InvalidParameter("r_i acts on Gamma_1".into()));
    }
    if i == 0 || i > spec.d {
        return Err(Error::SubsetOutOfRange {
            index: i,
            len: spec.d,
        });
    }
    let labelled = spec.labelled_generators();
    let gens: Vec<ProductElement<E>> = labelled.iter().map(|(a, u)| delta(*a, u)).collect();
    let images: Vec<ProductElement<E>> = labelled
        .iter()
        .map(|(a, u)| {
            if a.contains(i) {
                delta(a.toggle(i).expect("i in range"), u).mul(&delta(*a, u).inv())
            } else {
                delta(*a, u)
            }
        })
        .collect();
    let s = GroupHandle::new(spec.identity(), gens.clone()).with_config(*spec.g.config());
    let hom = GraphHom::new(&s, &images, s.identity())?;
    let report = hom.report().clone();
    let bijective = report.is_homomorphism
        && images.iter().all(|y| s.contains(y))
        && report.image_order == report.domain_order;
    let involution = report.is_homomorphism
        && images
            .iter()
            .zip(&gens)
            .all(|(y, x)| hom.apply(y).as_ref() == Some(x));

    // r_i(x)_B = x_C for every generator x identifies C ↦ B
    let coords = spec.coordinates();
    let mut perm = vec![u32::MAX; coords];
    let mut unique = true;
    for b in 0..coords {
        let candidates: Vec<usize> = (0..coords)
            .filter(|&c| {
                gens.iter()
                    .zip(&images)
                    .all(|(x, y)| y.components()[b] == x.components()[c])
            })
            .collect();
        match candidates.as_slice() {
            [c] if perm[*c] == u32::MAX => perm[*c] = b as u32,
            _ => unique = false,
        }
    }
    let subset = |m: usize| SubsetIndex::new(spec.d, m as u32).expect("coordinate in range");
    let kernel_perm = unique.then_some(perm);
    let kernel_map = kernel_perm.as_ref().map(|p| {
        spec.subsets()
            .into_iter()
            .map(|c| KernelImage {
                from: c.to_string(),
                to: subset(p[c.index()] as usize).to_string(),
            })
            .collect()
    });
    let symmetric_difference = kernel_perm
        .as_ref()
        .is_some_and(|p| (0..coords).all(|c| p[c] as usize == c ^ (1 << (i - 1))));
    Ok(RiReport {
        i,
        is_homomorphism: report.is_homomorphism,
        domain_order: report.domain_order.to_string(),
        graph_order: report.graph_order.to_string(),
        bijective,
        involution,
        kernel_map,
        symmetric_difference,
        kernel_perm,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkReport {
    pub d: usize,
    pub per_i: Vec<RiReport>,
    /// Order of the group the kernel permutations generate.
    pub kernel_group_order: Option<String>,
    /// That group is transitive of order `2^d` on the kernels.
    pub regular: bool,
}

impl RemarkReport {
    pub fn holds(&self) -> bool {
        self.regular && self.per_i.iter().all(RiReport::holds)
    }
}

/// Runs [`r_automorphism_check`] for `i = 1..=d` and checks that the induced
/// permutations generate a group acting regularly on the `2^d` kernels.
pub fn remark_ri_check<E: GroupElement>(spec: &GammaSpec<E>) -> Result<RemarkReport> {
    let per_i = (1..=spec.d)
        .map(|i| r_automorphism_check(spec, i))
        .collect::<Result<Vec<_>>>()?;
    let coords = spec.coordinates();
    let perms: Option<Vec<Permutation>> = per_i
        .iter()
        .map(|r| {
            r.kernel_perm
                .clone()
                .and_then(|p| Permutation::from_images(p).ok())
        })
        .collect();
    let (kernel_group_order, regular) = match perms {
        None => (None, false),
        Some(perms) => {
            let chain =
                StabilizerChain::build(Permutation::identity(coords), &perms, spec.g.config());
            let order = chain.order();
            let mut orbit = vec![false; coords];
            orbit[0] = true;
            let mut stack = vec![0usize];
            while let Some(p) = stack.pop() {
                for g in &perms {
                    let q = g.image(p);
                    if !orbit[q] {
                        orbit[q] = true;
                        stack.push(q);
                    }
                }
            }
            let transitive = orbit.iter().all(|&b| b);
            let regular = transitive && order == BigUint::from(coords);
            (Some(order.to_string()), regular)
        }
    };
    Ok(RemarkReport {
        d: spec.d,
        per_i,
        kernel_group_order,
        regular,
    })
}
