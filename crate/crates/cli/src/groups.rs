//! Group names and group-spec files.
//!
//! A spec file is JSON:
//!
//! ```json
//! {"type": "perm", "degree": 5, "generators": [[1, 2, 0, 3, 4], "(1,2,3,4,5)"]}
//! {"type": "matrix", "dim": 2, "field": "GF4", "generators": ["2003", "1110"]}
//! ```
//!
//! Permutation generators are 0-based image arrays or 1-based cycle
//! strings; matrix generators use the block or scalar literal format.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use sdp_core::families::{self, build_family, sl2_group, unitriangular_group, Member};
use sdp_core::matrix::matrix_to_perm;
use sdp_core::series::{gamma, iterated_commutator};
use sdp_core::{ChainConfig, Error, GroupHandle, Matrix, Permutation};

use crate::error::{CliError, CliResult};

/// A resolved group of either element type.
#[derive(Clone, Debug)]
pub enum AnyGroup {
    Perm(GroupHandle<Permutation>),
    Matrix(GroupHandle<Matrix>),
}

impl AnyGroup {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyGroup::Perm(_) => "perm",
            AnyGroup::Matrix(_) => "matrix",
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AnyGroup::Perm(g) => g.degree(),
            AnyGroup::Matrix(g) => g.degree(),
        }
    }
}

fn cycle(n: usize, points: &[u32]) -> Permutation {
    Permutation::from_cycles(n, &[points]).expect("valid cycle")
}

pub fn symmetric(n: usize) -> CliResult<GroupHandle<Permutation>> {
    if n == 0 {
        return Err(CliError::Usage("sym:n needs n >= 1".into()));
    }
    let all: Vec<u32> = (0..n as u32).collect();
    let gens = if n < 2 {
        Vec::new()
    } else {
        vec![cycle(n, &[0, 1]), cycle(n, &all)]
    };
    Ok(GroupHandle::new(Permutation::identity(n), gens).with_label(format!("sym:{n}")))
}

/// `A_n`, generated by the 3-cycles `(0 1 i)`.
pub fn alternating(n: usize) -> CliResult<GroupHandle<Permutation>> {
    if n == 0 {
        return Err(CliError::Usage("alt:n needs n >= 1".into()));
    }
    let gens = (2..n as u32).map(|i| cycle(n, &[0, 1, i])).collect();
    Ok(GroupHandle::new(Permutation::identity(n), gens).with_label(format!("alt:{n}")))
}

pub fn a5() -> GroupHandle<Permutation> {
    GroupHandle::new(
        Permutation::identity(5),
        vec![cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])],
    )
    .with_label("a5")
}

pub fn klein_four() -> GroupHandle<Permutation> {
    let gens = vec![
        Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).expect("valid"),
        Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).expect("valid"),
    ];
    GroupHandle::new(Permutation::identity(4), gens).with_label("v4")
}

pub fn dihedral8() -> GroupHandle<Permutation> {
    let gens = vec![
        cycle(4, &[0, 1, 2, 3]),
        Permutation::from_cycles(4, &[&[0, 2]]).expect("valid"),
    ];
    GroupHandle::new(Permutation::identity(4), gens).with_label("d8")
}

/// SL(2,4) ≅ A₅ acting on the 16 vectors of GF(4)².
pub fn sl2_on_vectors() -> CliResult<GroupHandle<Permutation>> {
    Ok(matrix_to_perm(sl2_group().generators(), 2)?.with_label("sl2:perm"))
}

fn parse_kv(text: &str, key: &str) -> Option<usize> {
    text.split(',')
        .find_map(|kv| kv.trim().strip_prefix(key)?.strip_prefix('='))
        .and_then(|v| v.trim().parse().ok())
}

fn family_member(
    blocks: usize,
    member: &str,
    config: ChainConfig,
) -> CliResult<GroupHandle<Matrix>> {
    let fam = build_family(blocks)?;
    let member = Member::parse(member, 0)?;
    let group = match member {
        Member::H | Member::M | Member::N | Member::G => fam.handle(member, config)?,
        Member::IteratedCommutator(j) => {
            let g = fam.handle(Member::G, config)?;
            let n = fam.handle(Member::N, config)?;
            families::attach_oracle(iterated_commutator(&g, &n, j), blocks, member)
        }
        Member::LowerCentral(j) => {
            let n = fam.handle(Member::N, config)?;
            families::attach_oracle(gamma(&n, j.max(1)), blocks, member)
        }
    };
    Ok(group)
}

/// Resolves a group name, or reads a spec file when `name` is not a known
/// name.
///
/// Names: `a5`, `a4`, `s4`, `v4`, `d8`, `sym:n`, `alt:n`, `sl2`, `sl2:perm`,
/// `sl6[:X]`, `sl2n:n=K[:X]` with `X` one of `H M N G GN_j gamma_j_N`
/// (default `G`), and `unitri:m=M,q=Q`.
pub fn resolve(name: &str, config: ChainConfig) -> CliResult<AnyGroup> {
    let perm = |g: GroupHandle<Permutation>| Ok(AnyGroup::Perm(g.with_config(config)));
    match name {
        "a5" => return perm(a5()),
        "a4" => return perm(alternating(4)?),
        "s4" => return perm(symmetric(4)?),
        "v4" => return perm(klein_four()),
        "d8" => return perm(dihedral8()),
        "sl2" => return Ok(AnyGroup::Matrix(sl2_group().with_config(config))),
        "sl2:perm" => return perm(sl2_on_vectors()?),
        _ => {}
    }
    if let Some(n) = name.strip_prefix("sym:") {
        let n = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad group name `{name}`")))?;
        return perm(symmetric(n)?);
    }
    if let Some(n) = name.strip_prefix("alt:") {
        let n = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad group name `{name}`")))?;
        return perm(alternating(n)?);
    }
    if name == "sl6" || name.starts_with("sl6:") {
        let member = name.strip_prefix("sl6:").unwrap_or("G");
        return Ok(AnyGroup::Matrix(family_member(3, member, config)?));
    }
    if let Some(rest) = name.strip_prefix("sl2n:") {
        let (params, member) = match rest.split_once(':') {
            Some((p, m)) => (p, m),
            None => (rest, "G"),
        };
        let n = parse_kv(params, "n")
            .ok_or_else(|| CliError::Usage(format!("`{name}`: expected sl2n:n=K[:X]")))?;
        return Ok(AnyGroup::Matrix(family_member(n, member, config)?));
    }
    if let Some(params) = name.strip_prefix("unitri:") {
        let (m, q) = (parse_kv(params, "m"), parse_kv(params, "q").or(Some(2)));
        let (Some(m), Some(q)) = (m, q) else {
            return Err(CliError::Usage(format!(
                "`{name}`: expected unitri:m=M,q=Q"
            )));
        };
        let g = unitriangular_group(m, q as u32)?.with_config(config);
        return Ok(AnyGroup::Matrix(g));
    }
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: name.to_string(),
            source,
        })?;
        return Ok(parse_group_spec(&text)?.with_config(config));
    }
    Err(CliError::Usage(format!("unknown group `{name}`")))
}

impl AnyGroup {
    pub fn with_config(self, config: ChainConfig) -> AnyGroup {
        match self {
            AnyGroup::Perm(g) => AnyGroup::Perm(g.with_config(config)),
            AnyGroup::Matrix(g) => AnyGroup::Matrix(g.with_config(config)),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpecFile {
    #[serde(rename = "type")]
    kind: String,
    degree: Option<usize>,
    dim: Option<usize>,
    field: Option<String>,
    label: Option<String>,
    generators: Vec<Value>,
}

/// 1-based line and column of byte offset `pos`.
fn line_column(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Re-anchors an error about generator `needle` at its position in `text`.
fn locate(text: &str, needle: &str, inner_column: usize, message: String) -> Error {
    let start = text
        .find("\"generators\"")
        .and_then(|g| text[g..].find(needle).map(|p| g + p))
        .unwrap_or(0);
    let (line, column) = line_column(text, start);
    Error::Parse {
        line,
        column: column + inner_column.saturating_sub(1),
        message,
    }
}

/// `(1,2,3)(4,5)` with 1-based points.
pub(crate) fn parse_cycles(s: &str, degree: usize) -> Result<Permutation, (usize, String)> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut seen = vec![false; degree];
    let mut current: Option<Vec<u32>> = None;
    let mut number = String::new();
    let mut number_start = 0;
    for (pos, ch) in s.char_indices() {
        let col = pos + 1;
        match ch {
            '(' if current.is_none() => current = Some(Vec::new()),
            '0'..='9' if current.is_some() => {
                if number.is_empty() {
                    number_start = col;
                }
                number.push(ch);
            }
            ',' | ')' if current.is_some() => {
                let p: usize = number
                    .parse()
                    .map_err(|_| (col, "expected a point".to_string()))?;
                if p == 0 || p > degree {
                    return Err((number_start, format!("point {p} outside 1..={degree}")));
                }
                if seen[p - 1] {
                    return Err((number_start, format!("point {p} repeated")));
                }
                seen[p - 1] = true;
                current.as_mut().expect("inside cycle").push((p - 1) as u32);
                number.clear();
                if ch == ')' {
                    let c = current.take().expect("inside cycle");
                    for (i, &a) in c.iter().enumerate() {
                        images[a as usize] = c[(i + 1) % c.len()];
                    }
                }
            }
            ' ' | '\t' => {}
            _ => return Err((col, format!("unexpected `{ch}`"))),
        }
    }
    if current.is_some() {
        return Err((s.len() + 1, "unclosed cycle".into()));
    }
    Permutation::from_images(images).map_err(|e| (1, e.to_string()))
}

/// Parses a group-spec file; errors carry 1-based line and column.
pub fn parse_group_spec(text: &str) -> Result<AnyGroup, Error> {
    let spec: GroupSpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let at_start = |message: String| {
        let (line, column) = text
            .find(|c: char| !c.is_whitespace())
            .map(|p| line_column(text, p))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message,
        }
    };
    let label = spec.label.clone().unwrap_or_else(|| "file".to_string());
    match spec.kind.as_str() {
        "perm" => {
            let degree = spec
                .degree
                .ok_or_else(|| at_start("perm spec needs \"degree\"".into()))?;
            let mut gens = Vec::new();
            for v in &spec.generators {
                let p = match v {
                    Value::String(s) => {
                        parse_cycles(s, degree).map_err(|(col, msg)| locate(text, s, col, msg))?
                    }
                    Value::Array(_) => {
                        let images: Vec<u32> = serde_json::from_value(v.clone())
                            .map_err(|e| at_start(format!("bad image array: {e}")))?;
                        if images.len() != degree {
                            return Err(at_start(format!(
                                "image array of length {} for degree {degree}",
                                images.len()
                            )));
                        }
                        Permutation::from_images(images).map_err(|e| at_start(e.to_string()))?
                    }
                    other => return Err(at_start(format!("bad generator {other}"))),
                };
                gens.push(p);
            }
            Ok(AnyGroup::Perm(
                GroupHandle::new(Permutation::identity(degree), gens).with_label(label),
            ))
        }
        "matrix" => {
            let dim = spec
                .dim
                .ok_or_else(|| at_start("matrix spec needs \"dim\"".into()))?;
            if let Some(f) = &spec.field {
                if !matches!(f.as_str(), "GF4" | "GF(4)" | "F4") {
                    return Err(at_start(format!("unsupported field `{f}`; only GF4")));
                }
            }
            let mut gens = Vec::new();
            for v in &spec.generators {
                let Value::String(s) = v else {
                    return Err(at_start(format!("matrix generator {v} is not a string")));
                };
                let m = Matrix::parse_literal(s, dim).map_err(|e| match e {
                    Error::Parse {
                        column, message, ..
                    } => locate(text, s, column, message),
                    other => other,
                })?;
                if m.inverse().is_err() {
                    return Err(locate(text, s, 1, "singular generator".into()));
                }
                gens.push(m);
            }
            Ok(AnyGroup::Matrix(
                GroupHandle::new(Matrix::identity(dim), gens).with_label(label),
            ))
        }
        other => Err(at_start(format!("unknown group type `{other}`"))),
    }
}
