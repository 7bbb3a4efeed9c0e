//! TOML files for CDGAs and manifolds.
//!
//! A free CDGA:
//!
//! ```toml
//! kind = "free"
//! label = "S^2"
//! generators = [
//!   { name = "e", degree = 2 },
//!   { name = "x", degree = 3 },
//! ]
//!
//! [differential]
//! x = "e^2"
//! ```
//!
//! A finite one lists `basis` instead of `generators` (the unit `1` is
//! implicit) and may add `products = [["a", "a", "a2"]]`, each triple
//! `u, v, u*v` with the product a linear expression in basis names.
//! Differentials of basis elements are linear too.
//!
//! A manifold wraps a finite model:
//!
//! ```toml
//! name = "CP^2"
//! dimension = 4
//!
//! [model]
//! kind = "finite"
//! ...
//!
//! [[pontryagin]]
//! index = 1
//! expression = "3*a^2"
//! ```
//!
//! Pontryagin expressions may multiply basis names. `to_toml` writes this
//! layout canonically, and parsing its output gives back the same value.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use ratimm_core::bundle::ManifoldModel;
use ratimm_core::gca::Generator;
use ratimm_core::{AlgebraError, Cdga, Element, FiniteCdga, FreeCdga, GeneratorSet, ParseError};
use serde::Deserialize;
use toml::Spanned;

/// An input error with its position in the file (1-based; 0 when the
/// whole file is at fault).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: ", self.line, self.column)?;
        }
        if !self.field.is_empty() {
            write!(f, "{}: ", self.field)?;
        }
        f.write_str(&self.message)
    }
}

struct Locator {
    line_starts: Vec<usize>,
}

impl Locator {
    fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Self { line_starts }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        (line, offset - self.line_starts[line - 1] + 1)
    }

    fn error(&self, span: Option<&Range<usize>>, field: impl Into<String>, message: impl Into<String>) -> FormatError {
        let (line, column) = span.map(|s| self.position(s.start)).unwrap_or((0, 0));
        FormatError { line, column, field: field.into(), message: message.into() }
    }

    /// An expression error: `span` covers the quoted string.
    fn expr_error(&self, span: &Range<usize>, field: impl Into<String>, err: &ParseError) -> FormatError {
        let (line, column) = self.position(span.start + 1 + err.position);
        FormatError { line, column, field: field.into(), message: err.to_string() }
    }

    fn toml_error(&self, err: &toml::de::Error) -> FormatError {
        self.error(err.span().as_ref(), "", err.message().trim_end())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdgaKind {
    Free,
    Finite,
}

/// Contents of a CDGA file, before any algebra is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdgaSpec {
    pub kind: CdgaKind,
    pub label: String,
    /// Generators (free) or basis elements other than `1` (finite).
    pub generators: Vec<(String, u32)>,
    /// Nonzero differentials, in generator order.
    pub differential: Vec<(String, String)>,
    pub products: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNamed {
    name: String,
    degree: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCdga {
    kind: Spanned<String>,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    generators: Option<Vec<Spanned<RawNamed>>>,
    #[serde(default)]
    basis: Option<Vec<Spanned<RawNamed>>>,
    #[serde(default)]
    differential: BTreeMap<Spanned<String>, Spanned<String>>,
    #[serde(default)]
    products: Vec<Spanned<(String, String, String)>>,
}

/// Where each part of a [`CdgaSpec`] came from.
#[derive(Debug, Clone, Default)]
struct Spans {
    whole: Range<usize>,
    generators: Vec<Range<usize>>,
    differential: BTreeMap<String, Range<usize>>,
    products: Vec<Range<usize>>,
}

fn convert(raw: RawCdga, whole: Range<usize>, prefix: &str, loc: &Locator) -> Result<(CdgaSpec, Spans), FormatError> {
    let (kind, list, list_field) = match raw.kind.get_ref().as_str() {
        "free" => (CdgaKind::Free, raw.generators, "generators"),
        "finite" => (CdgaKind::Finite, raw.basis, "basis"),
        other => {
            return Err(loc.error(Some(&raw.kind.span()), format!("{prefix}kind"), format!("expected \"free\" or \"finite\", found \"{other}\"")))
        }
    };
    let list = list.ok_or_else(|| loc.error(Some(&whole), prefix.trim_end_matches('.'), format!("missing `{list_field}`")))?;
    let mut spans = Spans { whole, ..Spans::default() };
    let mut generators = Vec::new();
    for (i, g) in list.into_iter().enumerate() {
        spans.generators.push(g.span());
        let g = g.into_inner();
        if g.name == "1" {
            return Err(loc.error(spans.generators.last(), format!("{prefix}{list_field}[{i}]"), "the unit `1` is implicit"));
        }
        generators.push((g.name, g.degree));
    }
    let order = |name: &str| generators.iter().position(|(g, _)| g == name);
    let mut differential = Vec::new();
    for (name, expr) in raw.differential {
        let field = format!("{prefix}differential.{}", name.get_ref());
        if order(name.get_ref()).is_none() {
            return Err(loc.error(Some(&name.span()), field, format!("`{}` is not declared in `{list_field}`", name.get_ref())));
        }
        spans.differential.insert(name.get_ref().clone(), expr.span());
        differential.push((name.into_inner(), expr.into_inner()));
    }
    differential.sort_by_key(|(name, _)| order(name));
    if kind == CdgaKind::Free && !raw.products.is_empty() {
        return Err(loc.error(Some(&raw.products[0].span()), format!("{prefix}products"), "free algebras have no product table"));
    }
    let mut products = Vec::new();
    for p in raw.products {
        spans.products.push(p.span());
        products.push(p.into_inner());
    }
    let label = raw.label.unwrap_or_default();
    Ok((CdgaSpec { kind, label, generators, differential, products }, spans))
}

/// A loaded CDGA file.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedCdga {
    Free(FreeCdga),
    Finite(FiniteCdga),
}

impl LoadedCdga {
    pub fn into_cdga(self) -> Cdga {
        match self {
            LoadedCdga::Free(a) => a.into_cdga(),
            LoadedCdga::Finite(a) => a.into(),
        }
    }
}

fn algebra_error(err: AlgebraError, spec: &CdgaSpec, spans: &Spans, prefix: &str, loc: &Locator) -> FormatError {
    let list_field = if spec.kind == CdgaKind::Free { "generators" } else { "basis" };
    let generator = |name: &str| spec.generators.iter().position(|(g, _)| g == name);
    let by_generator = |name: &str| {
        let name = name.strip_prefix("D(").and_then(|n| n.strip_suffix(')')).unwrap_or(name);
        if let Some(span) = spans.differential.get(name) {
            return Some((span.clone(), format!("{prefix}differential.{name}")));
        }
        generator(name).map(|i| (spans.generators[i].clone(), format!("{prefix}{list_field}[{i}]")))
    };
    let located = match &err {
        AlgebraError::DuplicateName(n) | AlgebraError::ZeroDegree(n) => {
            spec.generators.iter().rposition(|(g, _)| g == n).map(|i| (spans.generators[i].clone(), format!("{prefix}{list_field}[{i}]")))
        }
        AlgebraError::DegreeMismatch { name, .. } => by_generator(name),
        AlgebraError::NotHomogeneous(n) => by_generator(n),
        AlgebraError::NotSquareZero { generator, .. } => by_generator(generator),
        _ => None,
    };
    let (span, field) = located.unwrap_or((spans.whole.clone(), prefix.trim_end_matches('.').to_string()));
    loc.error(Some(&span), field, err.to_string())
}

fn build(spec: &CdgaSpec, spans: &Spans, prefix: &str, loc: &Locator) -> Result<LoadedCdga, FormatError> {
    let fail = |e| algebra_error(e, spec, spans, prefix, loc);
    let expr_fail = |name: &str, e: &ParseError| {
        loc.expr_error(&spans.differential[name], format!("{prefix}differential.{name}"), e)
    };
    match spec.kind {
        CdgaKind::Free => {
            let ctx = GeneratorSet::new(spec.generators.iter().map(|(n, d)| Generator::new(n.clone(), *d)).collect())
                .map_err(fail)?;
            let mut images: Vec<Element> = (0..ctx.len()).map(|_| Element::zero(&ctx)).collect();
            for (name, expr) in &spec.differential {
                let i = ctx.index_of(name).expect("checked while converting");
                images[i] = Element::parse(expr, &ctx).map_err(|e| expr_fail(name, &e))?;
            }
            FreeCdga::new(spec.label.clone(), ctx, images).map(LoadedCdga::Free).map_err(fail)
        }
        CdgaKind::Finite => {
            let mut b = FiniteCdga::builder(spec.label.clone());
            for (i, (name, degree)) in spec.generators.iter().enumerate() {
                b.element(name.clone(), *degree)
                    .map_err(|e| loc.error(Some(&spans.generators[i]), format!("{prefix}basis[{i}]"), e.to_string()))?;
            }
            for (i, (u, v, expr)) in spec.products.iter().enumerate() {
                let field = format!("{prefix}products[{i}]");
                let value = b.parse_linear(expr).map_err(|e| loc.error(Some(&spans.products[i]), &field, e.to_string()))?;
                b.product(u, v, value).map_err(|e| loc.error(Some(&spans.products[i]), &field, e.to_string()))?;
            }
            for (name, expr) in &spec.differential {
                let value = b.parse_linear(expr).map_err(|e| expr_fail(name, &e))?;
                b.differential(name, value).map_err(fail)?;
            }
            b.build().map(LoadedCdga::Finite).map_err(fail)
        }
    }
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn key(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        quote(s)
    }
}

impl CdgaSpec {
    /// Parses a CDGA file without checking the algebra.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse_cdga_with_spans(text).map(|(spec, _, _)| spec)
    }

    /// Writes the file; `table` is the enclosing table name (empty at top
    /// level).
    fn write(&self, table: &str, out: &mut String) {
        let kind = match self.kind {
            CdgaKind::Free => "free",
            CdgaKind::Finite => "finite",
        };
        out.push_str(&format!("kind = \"{kind}\"\n"));
        out.push_str(&format!("label = {}\n", quote(&self.label)));
        let list = if self.kind == CdgaKind::Free { "generators" } else { "basis" };
        out.push_str(&format!("{list} = [\n"));
        for (name, degree) in &self.generators {
            out.push_str(&format!("  {{ name = {}, degree = {degree} }},\n", quote(name)));
        }
        out.push_str("]\n");
        if !self.products.is_empty() {
            out.push_str("products = [\n");
            for (u, v, w) in &self.products {
                out.push_str(&format!("  [{}, {}, {}],\n", quote(u), quote(v), quote(w)));
            }
            out.push_str("]\n");
        }
        if !self.differential.is_empty() {
            let header = if table.is_empty() { "differential".to_string() } else { format!("{table}.differential") };
            out.push_str(&format!("\n[{header}]\n"));
            for (name, expr) in &self.differential {
                out.push_str(&format!("{} = {}\n", key(name), quote(expr)));
            }
        }
    }

    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        self.write("", &mut out);
        out
    }

    /// Checks the algebra and builds it.
    pub fn load(text: &str) -> Result<(Self, LoadedCdga), FormatError> {
        let (spec, spans, loc) = parse_cdga_with_spans(text)?;
        let built = build(&spec, &spans, "", &loc)?;
        Ok((spec, built))
    }

    pub fn from_free(a: &FreeCdga) -> Self {
        let gens = a.generators().generators();
        Self {
            kind: CdgaKind::Free,
            label: a.label().to_string(),
            generators: gens.iter().map(|g| (g.name.clone(), g.degree)).collect(),
            differential: (0..gens.len())
                .filter_map(|i| {
                    let d = a.differential_of(i);
                    (!d.is_zero()).then(|| (gens[i].name.clone(), d.to_string()))
                })
                .collect(),
            products: Vec::new(),
        }
    }

    pub fn from_finite(a: &FiniteCdga) -> Self {
        let mut products = Vec::new();
        for u in 1..a.dim() {
            for v in u..a.dim() {
                let p = a.product(u, v);
                if !p.is_empty() {
                    products.push((a.name(u).to_string(), a.name(v).to_string(), a.format_vec(p)));
                }
            }
        }
        Self {
            kind: CdgaKind::Finite,
            label: a.label().to_string(),
            generators: (1..a.dim()).map(|u| (a.name(u).to_string(), a.degree(u))).collect(),
            differential: (1..a.dim())
                .filter(|&u| !a.d(u).is_empty())
                .map(|u| (a.name(u).to_string(), a.format_vec(a.d(u))))
                .collect(),
            products,
        }
    }
}

impl fmt::Display for CdgaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}

fn parse_cdga_with_spans(text: &str) -> Result<(CdgaSpec, Spans, Locator), FormatError> {
    let loc = Locator::new(text);
    let raw: RawCdga = toml::from_str(text).map_err(|e| loc.toml_error(&e))?;
    let (spec, spans) = convert(raw, 0..text.len(), "", &loc)?;
    Ok((spec, spans, loc))
}

/// Contents of a manifold file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub name: String,
    pub dimension: u32,
    pub model: CdgaSpec,
    /// `(i, expression of p_i)`.
    pub pontryagin: Vec<(u32, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPontryagin {
    index: u32,
    expression: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifold {
    name: String,
    dimension: Spanned<u32>,
    model: Spanned<RawCdga>,
    #[serde(default)]
    pontryagin: Vec<Spanned<RawPontryagin>>,
}

impl ManifoldSpec {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Self::parse_with_spans(text).map(|(spec, ..)| spec)
    }

    #[allow(clippy::type_complexity)]
    fn parse_with_spans(text: &str) -> Result<(Self, Spans, Vec<(Range<usize>, Range<usize>)>, Range<usize>, Locator), FormatError> {
        let loc = Locator::new(text);
        let raw: RawManifold = toml::from_str(text).map_err(|e| loc.toml_error(&e))?;
        let model_span = raw.model.span();
        let (model, spans) = convert(raw.model.into_inner(), model_span, "model.", &loc)?;
        let mut pontryagin = Vec::new();
        let mut p_spans = Vec::new();
        for p in raw.pontryagin {
            let whole = p.span();
            let p = p.into_inner();
            p_spans.push((whole, p.expression.span()));
            pontryagin.push((p.index, p.expression.into_inner()));
        }
        let spec = Self { name: raw.name, dimension: *raw.dimension.get_ref(), model, pontryagin };
        Ok((spec, spans, p_spans, raw.dimension.span(), loc))
    }

    /// Checks everything and builds the manifold.
    pub fn load(text: &str) -> Result<(Self, ManifoldModel), FormatError> {
        let (spec, spans, p_spans, dim_span, loc) = Self::parse_with_spans(text)?;
        let model = match build(&spec.model, &spans, "model.", &loc)? {
            LoadedCdga::Finite(a) => a,
            LoadedCdga::Free(_) => {
                return Err(loc.error(Some(&spans.whole), "model.kind", "a manifold model must be finite"));
            }
        };
        let mut classes = Vec::new();
        for (j, (i, expr)) in spec.pontryagin.iter().enumerate() {
            let v = model.parse(expr).map_err(|e| loc.expr_error(&p_spans[j].1, format!("pontryagin[{j}].expression"), &e))?;
            classes.push((*i, v));
        }
        let manifold = ManifoldModel::new(spec.name.clone(), spec.dimension, model, classes).map_err(|e| match &e {
            AlgebraError::Pontryagin { index, .. } => {
                let j = spec.pontryagin.iter().position(|(i, _)| i == index).unwrap_or(0);
                loc.error(p_spans.get(j).map(|s| &s.0), format!("pontryagin[{j}]"), e.to_string())
            }
            AlgebraError::InvalidParameter(_) => loc.error(Some(&dim_span), "dimension", e.to_string()),
            _ => loc.error(Some(&spans.whole), "model", e.to_string()),
        })?;
        Ok((spec, manifold))
    }

    pub fn from_manifold(m: &ManifoldModel) -> Self {
        let model = m.model();
        Self {
            name: m.name().to_string(),
            dimension: m.dimension(),
            model: CdgaSpec::from_finite(model),
            pontryagin: m.pontryagin().iter().map(|(i, v)| (*i, model.format_vec(v))).collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        let mut out = format!("name = {}\ndimension = {}\n\n[model]\n", quote(&self.name), self.dimension);
        self.model.write("model", &mut out);
        for (i, expr) in &self.pontryagin {
            out.push_str(&format!("\n[[pontryagin]]\nindex = {i}\nexpression = {}\n", quote(expr)));
        }
        out
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratimm_core::cohomology;

    const S2: &str = "kind = \"free\"\nlabel = \"S^2\"\ngenerators = [\n  { name = \"e\", degree = 2 },\n  { name = \"x\", degree = 3 },\n]\n\n[differential]\nx = \"e^2\"\n";

    #[test]
    fn free_file_round_trips_bit_exactly() {
        let spec = CdgaSpec::parse(S2).unwrap();
        assert_eq!(spec.to_toml(), S2);
        let (_, a) = CdgaSpec::load(S2).unwrap();
        assert_eq!(cohomology(&a.into_cdga(), 6).support(), vec![0, 2]);
    }

    #[test]
    fn finite_file_from_algebra() {
        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        let spec = CdgaSpec::from_finite(&a);
        let text = spec.to_toml();
        assert!(text.contains("products = [\n  [\"a\", \"a\", \"a2\"],\n]\n"), "{text}");
        let (again, loaded) = CdgaSpec::load(&text).unwrap();
        assert_eq!(again, spec);
        assert_eq!(loaded, LoadedCdga::Finite(a));
    }

    #[test]
    fn errors_carry_positions() {
        let bad = S2.replace("e^2", "e^2 + q");
        let err = CdgaSpec::load(&bad).unwrap_err();
        assert_eq!((err.line, err.column), (9, 12));
        assert_eq!(err.field, "differential.x");

        let bad = S2.replace("x = \"e^2\"", "x = \"e\"");
        let err = CdgaSpec::load(&bad).unwrap_err();
        assert_eq!(err.line, 9);
        assert!(err.message.contains("degree"), "{err}");

        let err = CdgaSpec::load(&S2.replace("degree = 3", "degree = \"3\"")).unwrap_err();
        assert_eq!(err.line, 5);

        let err = CdgaSpec::load(&S2.replace("free", "cyclic")).unwrap_err();
        assert_eq!((err.line, err.field.as_str()), (1, "kind"));
    }

    #[test]
    fn quoted_keys() {
        let spec = CdgaSpec {
            kind: CdgaKind::Free,
            label: "with \"quotes\"".into(),
            generators: vec![("e'".into(), 2), ("x'".into(), 3)],
            differential: vec![("x'".into(), "e'^2".into())],
            products: vec![],
        };
        let text = spec.to_toml();
        assert_eq!(CdgaSpec::parse(&text).unwrap(), spec);
        assert!(CdgaSpec::load(&text).is_ok());
    }

    #[test]
    fn manifold_files() {
        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        let cp2 = ManifoldModel::from_exprs("CP^2", 4, a, &[(1, "3*a^2")]).unwrap();
        let spec = ManifoldSpec::from_manifold(&cp2);
        let text = spec.to_toml();
        assert_eq!(ManifoldSpec::parse(&text).unwrap().to_toml(), text);
        let (_, loaded) = ManifoldSpec::load(&text).unwrap();
        assert_eq!(loaded, cp2);

        let bad = text.replace("3*a2", "3*a");
        let err = ManifoldSpec::load(&bad).unwrap_err();
        assert_eq!(err.field, "pontryagin[0]");
        assert!(err.line > 0);

        let bad = text.replace("index = 1", "index = 2");
        assert_eq!(ManifoldSpec::load(&bad).unwrap_err().field, "pontryagin[0]");
    }
}
