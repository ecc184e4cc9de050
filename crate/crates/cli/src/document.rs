//! Session documents: a ring block followed by named varieties, sections,
//! maps and ODEs.
//!
//! ```text
//! ring:
//!   vars = x, y, z
//!   params = d0
//!   delta d0 = 1
//!
//! variety V:
//!   gens = x*z - 1
//!   claims = prime
//!
//! section s on V:
//!   x = y
//!   y = y*z
//!   z = -y*z^2
//! ```
//!
//! A variety may declare its own `vars`; it then lives in a ring with the
//! document's parameters and those variables. Map blocks read
//! `map NAME: SOURCE -> TARGET` where both ends name sections or ODEs, and
//! hold one `target_var = expression` line per target variable. ODE blocks
//! hold `order`, then `rhs` (explicit) or `implicit`, and optionally the jet
//! prefix `jets` (default `u`).

use std::collections::BTreeMap;
use std::fmt;

use dvar_core::dvariety::{validate_section, Claims, Section, Variety};
use dvar_core::expr::{parse_field_element, parse_polynomial, parse_rational_function, ParseError};
use dvar_core::ode::{compile, jet_ring, CompiledDVariety, OdeSpec};
use dvar_core::{DVariety, DvarError, FieldElement, Polynomial, RationalFunction, Ring, RingContext};

/// A problem in a document, located at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for DocError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> DocError {
    DocError {
        line,
        column,
        message: message.into(),
    }
}

impl From<(ParseError, usize, usize)> for DocError {
    fn from((e, line, column): (ParseError, usize, usize)) -> Self {
        let e = e.offset(line, column);
        err(e.line, e.column, e.message)
    }
}

#[derive(Clone, Debug)]
pub struct SectionDecl {
    pub variety: String,
    pub section: Section,
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub source: String,
    pub target: String,
    /// One component per target variable, over the source ring.
    pub components: Vec<RationalFunction>,
}

#[derive(Clone, Debug)]
pub struct OdeDecl {
    pub spec: OdeSpec,
    pub compiled: CompiledDVariety,
}

#[derive(Clone, Debug)]
pub struct SessionDocument {
    pub ring: Ring,
    pub varieties: BTreeMap<String, Variety>,
    pub sections: BTreeMap<String, SectionDecl>,
    pub maps: BTreeMap<String, MapDecl>,
    pub odes: BTreeMap<String, OdeDecl>,
}

/// A `key = value` line. `col` is where the value starts.
struct Entry {
    line: usize,
    key: String,
    value: String,
    col: usize,
}

struct Block {
    line: usize,
    header: String,
    entries: Vec<Entry>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_header(line: &str) -> bool {
    let first = line.split_whitespace().next().unwrap_or("");
    let first = first.trim_end_matches(':');
    matches!(first, "ring" | "variety" | "section" | "map" | "ode") && line.contains(':')
}

fn split_blocks(text: &str) -> Result<Vec<Block>, DocError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if indent == 0 && is_header(content) {
            blocks.push(Block {
                line,
                header: content.trim().to_string(),
                entries: Vec::new(),
            });
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            return Err(err(line, indent + 1, "expected a block header"));
        };
        let Some(eq) = content.find('=') else {
            return Err(err(line, indent + 1, "expected `key = value`"));
        };
        let key = content[..eq].trim().to_string();
        let rest = &content[eq + 1..];
        let lead = rest.len() - rest.trim_start().len();
        let col = content[..eq + 1 + lead].chars().count() + 1;
        block.entries.push(Entry {
            line,
            key,
            value: rest.trim().to_string(),
            col,
        });
    }
    Ok(blocks)
}

/// Comma-separated items with the column each starts at.
fn split_list(value: &str, col: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in value.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let c = col + value[..start + lead].chars().count();
        if !piece.trim().is_empty() {
            out.push((piece.trim().to_string(), c));
        }
        start += piece.len() + 1;
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_ring(block: &Block) -> Result<Ring, DocError> {
    let mut vars: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut deltas: Vec<&Entry> = Vec::new();
    for e in &block.entries {
        let mut words = e.key.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("vars"), None, _) => vars = names(e)?,
            (Some("params"), None, _) => params = names(e)?,
            (Some("delta"), Some(_), None) => deltas.push(e),
            _ => return Err(err(e.line, 1, format!("unknown ring key `{}`", e.key))),
        }
    }
    let base = RingContext::new(&[] as &[String], &params, BTreeMap::new()).map_err(|x| err(block.line, 1, x.to_string()))?;
    let mut map = BTreeMap::new();
    for e in deltas {
        let name = e.key.split_whitespace().nth(1).unwrap().to_string();
        if base.param_index(&name).is_none() {
            return Err(err(e.line, 1, format!("`{name}` is not a parameter")));
        }
        let value = parse_field_element(&e.value, &base).map_err(|x| DocError::from((x, e.line, e.col)))?;
        map.insert(name, value);
    }
    RingContext::new(&vars, &params, map).map_err(|x| err(block.line, 1, x.to_string()))
}

fn names(e: &Entry) -> Result<Vec<String>, DocError> {
    let mut out = Vec::new();
    for (name, col) in split_list(&e.value, e.col) {
        if !is_identifier(&name) {
            return Err(err(e.line, col, format!("`{name}` is not a valid name")));
        }
        out.push(name);
    }
    Ok(out)
}

impl SessionDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        let blocks = split_blocks(text)?;
        let mut iter = blocks.iter().peekable();
        let ring = match iter.peek() {
            Some(b) if b.header.trim_end_matches(':').trim() == "ring" => {
                let r = parse_ring(b)?;
                iter.next();
                r
            }
            _ => RingContext::autonomous(&[] as &[&str]).expect("empty ring"),
        };
        let mut doc = SessionDocument {
            ring,
            varieties: BTreeMap::new(),
            sections: BTreeMap::new(),
            maps: BTreeMap::new(),
            odes: BTreeMap::new(),
        };
        for b in iter {
            doc.add_block(b)?;
        }
        Ok(doc)
    }

    fn defined(&self, name: &str) -> bool {
        self.varieties.contains_key(name)
            || self.sections.contains_key(name)
            || self.maps.contains_key(name)
            || self.odes.contains_key(name)
    }

    fn claim_name(&self, b: &Block, name: &str, col: usize) -> Result<String, DocError> {
        if !is_identifier(name) {
            return Err(err(b.line, col, format!("`{name}` is not a valid name")));
        }
        if self.defined(name) {
            return Err(err(b.line, col, format!("`{name}` is already defined")));
        }
        Ok(name.to_string())
    }

    fn add_block(&mut self, b: &Block) -> Result<(), DocError> {
        let h = b.header.as_str();
        let (kind, rest) = h.split_once(char::is_whitespace).unwrap_or((h, ""));
        let rest = rest.trim();
        let col = h.len() - rest.len() + 1;
        match kind.trim_end_matches(':') {
            "ring" => Err(err(b.line, 1, "the ring block must come first and only once")),
            "variety" => {
                let name = rest.strip_suffix(':').ok_or_else(|| err(b.line, h.len(), "expected `:`"))?;
                let name = self.claim_name(b, name.trim(), col)?;
                let v = self.parse_variety(b)?;
                self.varieties.insert(name, v);
                Ok(())
            }
            "section" => {
                let body = rest.strip_suffix(':').ok_or_else(|| err(b.line, h.len(), "expected `:`"))?;
                let words: Vec<&str> = body.split_whitespace().collect();
                let [name, "on", var] = words[..] else {
                    return Err(err(b.line, col, "expected `section NAME on VARIETY:`"));
                };
                let name = self.claim_name(b, name, col)?;
                let v = self
                    .varieties
                    .get(var)
                    .ok_or_else(|| err(b.line, col, format!("unknown variety `{var}`")))?;
                let section = parse_section(b, v.ring())?;
                self.sections.insert(
                    name,
                    SectionDecl {
                        variety: var.to_string(),
                        section,
                    },
                );
                Ok(())
            }
            "map" => {
                let (name, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| err(b.line, col, "expected `map NAME: SOURCE -> TARGET`"))?;
                let (src, tgt) = ends
                    .split_once("->")
                    .ok_or_else(|| err(b.line, col, "expected `map NAME: SOURCE -> TARGET`"))?;
                let name = self.claim_name(b, name.trim(), col)?;
                let (src, tgt) = (src.trim(), tgt.trim());
                let src_ring = self
                    .endpoint_ring(src)
                    .ok_or_else(|| err(b.line, col, format!("unknown section or ode `{src}`")))?;
                let tgt_ring = self
                    .endpoint_ring(tgt)
                    .ok_or_else(|| err(b.line, col, format!("unknown section or ode `{tgt}`")))?;
                let mut comps: BTreeMap<String, RationalFunction> = BTreeMap::new();
                for e in &b.entries {
                    if tgt_ring.var_index(&e.key).is_none() {
                        return Err(err(e.line, 1, format!("`{}` is not a variable of `{tgt}`", e.key)));
                    }
                    let f = parse_rational_function(&e.value, &src_ring).map_err(|x| DocError::from((x, e.line, e.col)))?;
                    if comps.insert(e.key.clone(), f).is_some() {
                        return Err(err(e.line, 1, format!("`{}` given twice", e.key)));
                    }
                }
                let mut components = Vec::new();
                for v in tgt_ring.vars() {
                    components.push(
                        comps
                            .remove(v)
                            .ok_or_else(|| err(b.line, 1, format!("no component for `{v}`")))?,
                    );
                }
                self.maps.insert(
                    name,
                    MapDecl {
                        source: src.to_string(),
                        target: tgt.to_string(),
                        components,
                    },
                );
                Ok(())
            }
            "ode" => {
                let name = rest.strip_suffix(':').ok_or_else(|| err(b.line, h.len(), "expected `:`"))?;
                let name = self.claim_name(b, name.trim(), col)?;
                let decl = self.parse_ode(b)?;
                self.odes.insert(name, decl);
                Ok(())
            }
            other => Err(err(b.line, 1, format!("unknown block `{other}`"))),
        }
    }

    fn endpoint_ring(&self, name: &str) -> Option<Ring> {
        if let Some(s) = self.sections.get(name) {
            return Some(self.varieties[&s.variety].ring().clone());
        }
        self.odes.get(name).map(|o| o.compiled.dvariety.ring().clone())
    }

    fn parse_variety(&self, b: &Block) -> Result<Variety, DocError> {
        let mut ring = self.ring.clone();
        if let Some(e) = b.entries.iter().find(|e| e.key == "vars") {
            ring = self
                .ring
                .with_vars(&names(e)?)
                .map_err(|x| err(e.line, e.col, x.to_string()))?;
        }
        let mut gens = Vec::new();
        let mut claims = Claims::default();
        for e in &b.entries {
            match e.key.as_str() {
                "vars" => {}
                "gens" => {
                    for (text, col) in split_list(&e.value, e.col) {
                        let p = parse_polynomial(&text, &ring).map_err(|x| DocError::from((x, e.line, col)))?;
                        if !p.is_zero() {
                            gens.push(p);
                        }
                    }
                }
                "claims" => {
                    for (c, col) in split_list(&e.value, e.col) {
                        match c.as_str() {
                            "radical" => claims.radical = true,
                            "prime" => claims.prime = true,
                            _ => return Err(err(e.line, col, format!("unknown claim `{c}`"))),
                        }
                    }
                }
                k => return Err(err(e.line, 1, format!("unknown variety key `{k}`"))),
            }
        }
        Variety::new(&ring, gens, claims).map_err(|x| err(b.line, 1, x.to_string()))
    }

    fn parse_ode(&self, b: &Block) -> Result<OdeDecl, DocError> {
        let get = |k: &str| b.entries.iter().find(|e| e.key == k);
        for e in &b.entries {
            if !matches!(e.key.as_str(), "order" | "rhs" | "implicit" | "jets") {
                return Err(err(e.line, 1, format!("unknown ode key `{}`", e.key)));
            }
        }
        let oe = get("order").ok_or_else(|| err(b.line, 1, "missing `order`"))?;
        let order: usize = oe
            .value
            .parse()
            .map_err(|_| err(oe.line, oe.col, "order must be a positive integer"))?;
        let prefix = match get("jets") {
            Some(e) if is_identifier(&e.value) => e.value.clone(),
            Some(e) => return Err(err(e.line, e.col, "jet prefix must be a name")),
            None => "u".to_string(),
        };
        let ring = jet_ring(&self.ring, order, &prefix).map_err(|x| err(b.line, 1, x.to_string()))?;
        let spec = match (get("rhs"), get("implicit")) {
            (Some(e), None) => {
                let f = parse_rational_function(&e.value, &ring).map_err(|x| DocError::from((x, e.line, e.col)))?;
                OdeSpec::explicit(&ring, order, &f)
            }
            (None, Some(e)) => {
                let p = parse_polynomial(&e.value, &ring).map_err(|x| DocError::from((x, e.line, e.col)))?;
                OdeSpec::new(&ring, order, dvar_core::ode::OdeForm::Implicit(p))
            }
            _ => return Err(err(b.line, 1, "give exactly one of `rhs` and `implicit`")),
        }
        .map_err(|x| err(b.line, 1, x.to_string()))?;
        let compiled = compile(&spec).map_err(|x| err(b.line, 1, x.to_string()))?;
        Ok(OdeDecl { spec, compiled })
    }

    /// The variety and section named by a section, without validating.
    pub fn section_pair(&self, name: &str) -> Option<(&Variety, &Section)> {
        let s = self.sections.get(name)?;
        Some((&self.varieties[&s.variety], &s.section))
    }

    /// A D-variety named by a section or an ODE. Sections are validated.
    pub fn dvariety(&self, name: &str) -> Option<Result<DVariety, DvarError>> {
        if let Some((v, s)) = self.section_pair(name) {
            return Some(validate_section(v, s));
        }
        self.odes.get(name).map(|o| Ok(o.compiled.dvariety.clone()))
    }

    pub fn parse_point_value(&self, text: &str) -> Result<FieldElement, ParseError> {
        parse_field_element(text, &self.ring)
    }
}

fn parse_section(b: &Block, ring: &Ring) -> Result<Section, DocError> {
    let mut comps: BTreeMap<String, Polynomial> = BTreeMap::new();
    for e in &b.entries {
        if ring.var_index(&e.key).is_none() {
            return Err(err(e.line, 1, format!("`{}` is not a variable of the variety", e.key)));
        }
        let p = parse_polynomial(&e.value, ring).map_err(|x| DocError::from((x, e.line, e.col)))?;
        if comps.insert(e.key.clone(), p).is_some() {
            return Err(err(e.line, 1, format!("`{}` given twice", e.key)));
        }
    }
    for v in ring.vars() {
        if !comps.contains_key(v) {
            return Err(err(b.line, 1, format!("no component for `{v}`")));
        }
    }
    Section::from_named(ring, comps).map_err(|x| err(b.line, 1, x.to_string()))
}
