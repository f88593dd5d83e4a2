//! The `series` and `gamma` subcommands.

use num_bigint::BigUint;
use serde_json::{json, Value};

use sdp_core::families::{self, Member};
use sdp_core::gamma::{delta, family_gamma_spec, peel, theorem2_check, verify_lcc, GammaSpec};
use sdp_core::series::{derived_series, iterated_commutator_chain, lower_central_series};
use sdp_core::subset::SubsetIndex;
use sdp_core::{ChainConfig, GroupElement, GroupHandle, Matrix, Permutation};

use crate::error::{CliError, CliResult};
use crate::groups::{parse_cycles, resolve, AnyGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesKindArg {
    Lcs,
    Derived,
    Iterated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GammaAction {
    Order,
    Member,
    Lcc,
}

fn series_of<E: GroupElement>(
    g: &GroupHandle<E>,
    normal: Option<&GroupHandle<E>>,
    kind: SeriesKindArg,
    max: usize,
) -> CliResult<Value> {
    let report = match kind {
        SeriesKindArg::Lcs => lower_central_series(g, max),
        SeriesKindArg::Derived => derived_series(g, max),
        SeriesKindArg::Iterated => iterated_commutator_chain(g, normal.unwrap_or(g), max)?,
    };
    Ok(serde_json::to_value(report.summary()).expect("json"))
}

pub fn series(
    group: &str,
    normal: Option<&str>,
    kind: SeriesKindArg,
    max: usize,
    config: ChainConfig,
) -> CliResult<Value> {
    if normal.is_some() && kind != SeriesKindArg::Iterated {
        return Err(CliError::Usage(
            "--normal only applies to --kind iterated".into(),
        ));
    }
    let g = resolve(group, config)?;
    let n = normal.map(|n| resolve(n, config)).transpose()?;
    match (g, n) {
        (AnyGroup::Perm(g), None) => series_of(&g, None, kind, max),
        (AnyGroup::Perm(g), Some(AnyGroup::Perm(n))) => series_of(&g, Some(&n), kind, max),
        (AnyGroup::Matrix(g), None) => series_of(&g, None, kind, max),
        (AnyGroup::Matrix(g), Some(AnyGroup::Matrix(n))) => series_of(&g, Some(&n), kind, max),
        _ => Err(CliError::Usage(
            "group and normal subgroup must have the same kind".into(),
        )),
    }
}

pub struct GammaArgs<'a> {
    pub g: &'a str,
    pub n: &'a str,
    pub d: usize,
    pub k: usize,
    pub action: GammaAction,
    pub element: Option<&'a str>,
    pub max_chain_degree: usize,
}

/// Number of SL(2,4) blocks when `name` is a member of the SL(2n,4) family.
fn family_blocks(name: &str) -> Option<usize> {
    if name == "sl6" || name.starts_with("sl6:") {
        return Some(3);
    }
    let rest = name.strip_prefix("sl2n:")?;
    let params = rest.split(':').next()?;
    params
        .split(',')
        .find_map(|kv| kv.trim().strip_prefix("n=")?.parse().ok())
}

fn order_value<E: GroupElement>(spec: &GammaSpec<E>, max_degree: usize) -> Value {
    let degree = spec.coordinates() * spec.g.degree();
    if degree > max_degree {
        return json!({
            "status": "skipped",
            "reason": format!("product degree {degree} exceeds --max-chain-degree {max_degree}"),
        });
    }
    let order: BigUint = spec.group().order();
    json!({ "order": order.to_string(), "degree": degree })
}

fn member_value<E: GroupElement>(spec: &GammaSpec<E>, w: &E) -> Value {
    let x = delta(SubsetIndex::full(spec.d), w);
    let p = peel(&x, spec);
    json!({
        "element": "Delta_[d](w)",
        "member": p.accepted,
        "rejected_at": p.rejected_at.map(|a| a.to_string()),
    })
}

fn spec_header<E: GroupElement>(spec: &GammaSpec<E>) -> Value {
    let factors: Vec<Value> = spec
        .factors()
        .iter()
        .map(|(kind, h)| json!({ "factor": kind.to_string(), "order": h.order().to_string() }))
        .collect();
    json!({ "d": spec.d, "k": spec.k, "coordinates": spec.coordinates(), "factors": factors })
}

pub fn gamma(args: &GammaArgs, config: ChainConfig) -> CliResult<Value> {
    let (d, k) = (args.d, args.k);
    if d == 0 || d > sdp_core::gamma::MAX_GAMMA_D {
        return Err(CliError::Usage(format!(
            "--d must lie in 1..={}",
            sdp_core::gamma::MAX_GAMMA_D
        )));
    }
    if k == 0 || k > d + 1 {
        return Err(CliError::Usage(format!(
            "--k must lie in 1..={} for d = {d}",
            d + 1
        )));
    }
    let g = resolve(args.g, config)?;
    let n = resolve(args.n, config)?;
    let mut out = match (g, n) {
        (AnyGroup::Perm(g), AnyGroup::Perm(n)) => gamma_perm(args, &g, &n)?,
        (AnyGroup::Matrix(g), AnyGroup::Matrix(n)) => gamma_matrix(args, &g, &n, config)?,
        _ => {
            return Err(CliError::Usage(
                "--g and --n must have the same kind".into(),
            ))
        }
    };
    if let Value::Object(map) = &mut out {
        map.insert("g".into(), json!(args.g));
        map.insert("n".into(), json!(args.n));
    }
    Ok(out)
}

fn gamma_perm(
    args: &GammaArgs,
    g: &GroupHandle<Permutation>,
    n: &GroupHandle<Permutation>,
) -> CliResult<Value> {
    let spec = GammaSpec::new(g, n, args.d, args.k)?;
    let mut out = spec_header(&spec);
    let result = match args.action {
        GammaAction::Order => order_value(&spec, args.max_chain_degree),
        GammaAction::Member => {
            let text = args
                .element
                .ok_or_else(|| CliError::Usage("--action member needs --element".into()))?;
            let w = parse_cycles(text, g.degree()).map_err(|(col, message)| {
                CliError::Usage(format!("--element column {col}: {message}"))
            })?;
            member_value(&spec, &w)
        }
        GammaAction::Lcc => serde_json::to_value(verify_lcc(g, n, args.d)?).expect("json"),
    };
    out["result"] = result;
    Ok(out)
}

fn gamma_matrix(
    args: &GammaArgs,
    g: &GroupHandle<Matrix>,
    n: &GroupHandle<Matrix>,
    config: ChainConfig,
) -> CliResult<Value> {
    let family = family_blocks(args.g).filter(|_| family_blocks(args.n).is_some());
    let spec = match family {
        Some(blocks) => family_gamma_spec(blocks, args.d, args.k, config)?,
        None => GammaSpec::new(g, n, args.d, args.k)?,
    };
    let mut out = spec_header(&spec);
    let parse = |text: &str| Matrix::parse_literal(text, g.identity().dim());
    let result = match args.action {
        GammaAction::Order => order_value(&spec, args.max_chain_degree),
        GammaAction::Member => {
            let text = args
                .element
                .ok_or_else(|| CliError::Usage("--action member needs --element".into()))?;
            member_value(&spec, &parse(text)?)
        }
        GammaAction::Lcc => {
            // The chain comparison is out of reach here; peel the gap witness
            // against Γ_d and Γ_{d+1} instead.
            let Some(blocks) = family else {
                return Err(CliError::Usage(
                    "--action lcc on matrix groups needs the sl6 / sl2n family".into(),
                ));
            };
            if args.d >= blocks {
                return Err(CliError::Usage(format!("--d must be below n = {blocks}")));
            }
            let w = match args.element {
                Some(text) => parse(text)?,
                None => families::structural_witness(blocks, args.d),
            };
            let upper = family_gamma_spec(blocks, args.d, args.d, config)?;
            let lower = family_gamma_spec(blocks, args.d, args.d + 1, config)?;
            let in_gap = families::structural_member(blocks, Member::LowerCentral(args.d), &w)
                && !families::structural_member(blocks, Member::IteratedCommutator(args.d), &w);
            let report = theorem2_check(&upper, &lower, &w)?;
            json!({
                "mode": "structural",
                "witness": w.to_block_literal(),
                "witness_in_gap": in_gap,
                "report": report,
            })
        }
    };
    out["result"] = result;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names() {
        assert_eq!(family_blocks("sl6:N"), Some(3));
        assert_eq!(family_blocks("sl2n:n=4:GN_2"), Some(4));
        assert_eq!(family_blocks("a5"), None);
    }
}
