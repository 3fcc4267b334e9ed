//! Metric and generator file formats.
//!
//! Metric files are line oriented:
//!
//! ```text
//! # comment
//! dim = 4
//! coords = t, x, y, z
//! params = a=1
//! basis = sin(t/a), cos(t/a)
//! g[t,t] = cosh(x/a)^2
//! g[x,x] = -1
//! ```
//!
//! Generator files hold `symmetry:` blocks with `xi`, `eta[c]`, `gauge`
//! and `expected_gauge` lines. Omitted components are zero and an empty
//! or missing gauge is derived.

use std::collections::BTreeMap;
use std::fmt;

use conslaw_core::expr::{parse_expression, Expr, ParseError, Poly, SymbolTable};
use conslaw_core::geometry::Metric;
use conslaw_core::noether::Generator;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// A diagnostic pinned to a 1-based line and column. Line 0 refers to the
/// file as a whole.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct FileError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.path, self.message)
        } else {
            write!(f, "{}:{}:{}: {}", self.path, self.line, self.column, self.message)
        }
    }
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> FileError {
        FileError {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }
}

/// One `key = value` line with the 1-based column where the value starts.
struct Line<'a> {
    number: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

fn strip_comment(raw: &str) -> &str {
    raw.split_once('#').map_or(raw, |(head, _)| head)
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn split_line<'a>(ctx: &Ctx, number: usize, raw: &'a str) -> Result<Option<Line<'a>>, FileError> {
    let text = strip_comment(raw);
    if text.trim().is_empty() {
        return Ok(None);
    }
    let key_col = leading_ws(text) + 1;
    let Some(eq) = text.find('=') else {
        return Err(ctx.err(number, key_col, "expected `key = value`"));
    };
    let key = text[..eq].trim();
    let rest = &text[eq + 1..];
    let value_col = eq + 2 + leading_ws(rest);
    Ok(Some(Line {
        number,
        key,
        key_col,
        value: rest.trim(),
        value_col,
    }))
}

/// Splits on commas at parenthesis depth zero, returning each piece with its
/// byte offset inside `s`.
fn split_list(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out.into_iter()
        .map(|(off, piece)| (off + leading_ws(piece), piece.trim()))
        .filter(|(_, piece)| !piece.is_empty())
        .collect()
}

fn parse_expr_at(ctx: &Ctx, table: &SymbolTable, line: usize, col: usize, text: &str) -> Result<Expr, FileError> {
    parse_expression(text, table).map_err(|e| {
        let message = match &e {
            ParseError::Syntax { msg, .. } => msg.clone(),
            ParseError::UnknownIdentifier { name, .. } => format!("unknown identifier `{name}`"),
            ParseError::MalformedRational { text, .. } => format!("malformed rational `{text}`"),
        };
        ctx.err(line, col + e.column().saturating_sub(1), message)
    })
}

#[derive(Clone, Debug)]
pub struct MetricFile {
    pub metric: Metric,
    pub basis: Vec<Expr>,
    /// Numeric values given in the `params` directive.
    pub bindings: BTreeMap<String, f64>,
}

impl MetricFile {
    pub fn parse(text: &str, path: &str) -> Result<MetricFile, FileError> {
        let ctx = Ctx { path };
        let mut dim: Option<(usize, usize)> = None;
        let mut coords: Option<(usize, Vec<String>)> = None;
        let mut params: Vec<String> = Vec::new();
        let mut bindings = BTreeMap::new();
        let mut basis_line: Option<(usize, usize, String)> = None;
        let mut entries: Vec<(usize, usize, String, usize, String)> = Vec::new();
        let mut seen_params = false;

        for (i, raw) in text.lines().enumerate() {
            let Some(l) = split_line(&ctx, i + 1, raw)? else {
                continue;
            };
            match l.key {
                "dim" => {
                    if dim.is_some() {
                        return Err(ctx.err(l.number, l.key_col, "duplicate `dim`"));
                    }
                    let n = l
                        .value
                        .parse::<usize>()
                        .map_err(|_| ctx.err(l.number, l.value_col, format!("`{}` is not a dimension", l.value)))?;
                    dim = Some((n, l.number));
                }
                "coords" => {
                    if coords.is_some() {
                        return Err(ctx.err(l.number, l.key_col, "duplicate `coords`"));
                    }
                    let names: Vec<String> = split_list(l.value).into_iter().map(|(_, c)| c.to_string()).collect();
                    coords = Some((l.number, names));
                }
                "params" => {
                    if seen_params {
                        return Err(ctx.err(l.number, l.key_col, "duplicate `params`"));
                    }
                    seen_params = true;
                    for (off, item) in split_list(l.value) {
                        let (name, value) = match item.split_once('=') {
                            Some((n, v)) => (n.trim(), Some(v.trim())),
                            None => (item, None),
                        };
                        if let Some(v) = value {
                            let x = v.parse::<f64>().map_err(|_| {
                                ctx.err(l.number, l.value_col + off, format!("`{v}` is not a number"))
                            })?;
                            bindings.insert(name.to_string(), x);
                        }
                        params.push(name.to_string());
                    }
                }
                "basis" => {
                    if basis_line.is_some() {
                        return Err(ctx.err(l.number, l.key_col, "duplicate `basis`"));
                    }
                    basis_line = Some((l.number, l.value_col, l.value.to_string()));
                }
                key if key.starts_with("g[") && key.ends_with(']') => {
                    let inner = &key[2..key.len() - 1];
                    let Some((a, b)) = inner.split_once(',') else {
                        return Err(ctx.err(l.number, l.key_col, format!("expected `g[ci,cj]`, got `{key}`")));
                    };
                    entries.push((l.number, l.key_col, format!("{},{}", a.trim(), b.trim()), l.value_col, l.value.to_string()));
                }
                other => return Err(ctx.err(l.number, l.key_col, format!("unknown directive `{other}`"))),
            }
        }

        let Some((coords_line, coords)) = coords else {
            return Err(ctx.err(0, 0, "missing `coords`"));
        };
        if let Some((n, line)) = dim {
            if n != coords.len() {
                return Err(ctx.err(line, 1, format!("dim = {n} but {} coordinates are declared", coords.len())));
            }
        }
        let table = SymbolTable::new(&coords, &params).map_err(|e| ctx.err(coords_line, 1, e.to_string()))?;
        let n = table.dim();

        let mut g: Vec<Vec<Option<(usize, Poly)>>> = vec![vec![None; n]; n];
        for (line, key_col, inner, value_col, value) in &entries {
            let (a, b) = inner.split_once(',').expect("checked above");
            let lookup = |c: &str| {
                table
                    .coord_position(c)
                    .ok_or_else(|| ctx.err(*line, *key_col, format!("unknown coordinate `{c}`")))
            };
            let (i, j) = (lookup(a)?, lookup(b)?);
            if value.is_empty() {
                return Err(ctx.err(*line, *value_col, "missing expression"));
            }
            let e = parse_expr_at(&ctx, &table, *line, *value_col, value)?;
            if e.depends_on_velocity() {
                return Err(ctx.err(*line, *value_col, "metric components must not depend on velocities"));
            }
            let p = e.to_poly();
            for (r, c) in [(i, j), (j, i)] {
                if let Some((prev, q)) = &g[r][c] {
                    if *q != p {
                        return Err(ctx.err(
                            *line,
                            *key_col,
                            format!("conflicts with the entry on line {prev}"),
                        ));
                    }
                }
                g[r][c] = Some((*line, p.clone()));
            }
        }
        let g: Vec<Vec<Poly>> = g
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.map(|(_, p)| p).unwrap_or_default()).collect())
            .collect();
        let metric = Metric::from_polys(table, g).map_err(|e| ctx.err(0, 0, e.to_string()))?;

        let mut basis = Vec::new();
        if let Some((line, col, value)) = basis_line {
            for (off, item) in split_list(&value) {
                let e = parse_expr_at(&ctx, metric.table(), line, col + off, item)?;
                if e.depends_on_velocity() {
                    return Err(ctx.err(line, col + off, "basis functions must not depend on velocities"));
                }
                basis.push(e);
            }
        }
        Ok(MetricFile { metric, basis, bindings })
    }

    /// SHA-256 over the canonical rendering of coordinates, parameters and
    /// components, so formatting changes leave it unchanged.
    pub fn hash(&self) -> String {
        let m = &self.metric;
        let mut h = Sha256::new();
        let names = |s: &[conslaw_core::expr::Symbol]| s.iter().map(|c| c.name().to_string()).collect::<Vec<_>>().join(",");
        h.update(format!("coords={}\n", names(m.coords())));
        h.update(format!("params={}\n", names(m.params())));
        for a in 0..m.dim() {
            for b in a..m.dim() {
                h.update(format!("g[{a},{b}]={}\n", m.component(a, b)));
            }
        }
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub line: usize,
    pub generator: Generator,
    pub gauge: Option<Expr>,
    /// A gauge quoted from elsewhere, compared against the one found.
    pub expected_gauge: Option<Expr>,
}

pub fn parse_generators(text: &str, path: &str, table: &SymbolTable) -> Result<Vec<Candidate>, FileError> {
    struct Block {
        label: String,
        line: usize,
        xi: Option<Expr>,
        eta: Vec<Option<Expr>>,
        gauge: Option<Expr>,
        expected: Option<Expr>,
    }
    let ctx = Ctx { path };
    let n = table.dim();
    let mut blocks: Vec<Block> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("symmetry:") {
            let label = rest.trim();
            blocks.push(Block {
                label: if label.is_empty() { format!("candidate {}", blocks.len()) } else { label.to_string() },
                line: number,
                xi: None,
                eta: vec![None; n],
                gauge: None,
                expected: None,
            });
            continue;
        }
        let Some(l) = split_line(&ctx, number, raw)? else {
            continue;
        };
        let Some(block) = blocks.last_mut() else {
            return Err(ctx.err(number, l.key_col, "expected `symmetry:` before the first component"));
        };
        let parse = |text: &str| -> Result<Option<Expr>, FileError> {
            if text.is_empty() {
                return Ok(None);
            }
            let e = parse_expr_at(&ctx, table, number, l.value_col, text)?;
            if e.depends_on_velocity() {
                return Err(ctx.err(number, l.value_col, "generator components must not depend on velocities"));
            }
            Ok(Some(e))
        };
        let dup = || ctx.err(number, l.key_col, format!("duplicate `{}` in this block", l.key));
        match l.key {
            "xi" => {
                if block.xi.is_some() {
                    return Err(dup());
                }
                block.xi = Some(parse(l.value)?.unwrap_or_else(Expr::zero));
            }
            "gauge" => {
                if block.gauge.is_some() {
                    return Err(dup());
                }
                block.gauge = parse(l.value)?;
            }
            "expected_gauge" => {
                if block.expected.is_some() {
                    return Err(dup());
                }
                block.expected = parse(l.value)?;
            }
            key if key.starts_with("eta[") && key.ends_with(']') => {
                let c = key[4..key.len() - 1].trim();
                let a = table
                    .coord_position(c)
                    .ok_or_else(|| ctx.err(number, l.key_col, format!("unknown coordinate `{c}`")))?;
                if block.eta[a].is_some() {
                    return Err(dup());
                }
                block.eta[a] = Some(parse(l.value)?.unwrap_or_else(Expr::zero));
            }
            other => return Err(ctx.err(number, l.key_col, format!("unknown key `{other}`"))),
        }
    }
    if blocks.is_empty() {
        return Err(ctx.err(0, 0, "no `symmetry:` blocks"));
    }
    Ok(blocks
        .into_iter()
        .map(|b| Candidate {
            label: b.label,
            line: b.line,
            generator: Generator::new(
                b.xi.unwrap_or_else(Expr::zero),
                b.eta.into_iter().map(|e| e.unwrap_or_else(Expr::zero)).collect(),
            ),
            gauge: b.gauge,
            expected_gauge: b.expected,
        })
        .collect())
}
