//! Command-line grammar and dispatch.
//!
//! A D-variety is referred to either as `V s` (a variety and a section on
//! it), by a section name alone, or by an ODE name (its compiled form).

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use dvar_core::dmaps::{
    darboux_polynomials, image_closure, is_d_rational_map, is_dominant, is_generically_finite,
    polynomial_first_integrals, rational_first_integrals, RationalMap,
};
use dvar_core::dvariety::{
    components_delta_check_ambient, generic_type_dimension, induced_derivation, is_d_point, is_d_subvariety,
    product, prolongation, tangent_bundle, validate_section, ComponentsReport, DoubledVariety, GeneratorCheck,
    SubvarietyReport,
};
use dvar_core::expr::{format_field_element, parse_polynomial};
use dvar_core::ideal::{ideal_member, krull_dimension, Dimension, GroebnerBasis};
use dvar_core::ode::{section_by_name, type_signature};
use dvar_core::{DVariety, DerivationSpec, DvarError, MonomialOrder, Polynomial, Section, Variety};

use crate::document::SessionDocument;
use crate::report::CommandResult;

#[derive(Parser, Debug, Clone)]
#[command(name = "dvar", version, about = "Exact computations with affine D-varieties")]
pub struct Cli {
    /// Session document (standard input when omitted).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Print a JSON object with status, verdict and certificates.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include membership certificates (cofactors and remainders).
    #[arg(long, global = true)]
    pub certify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Tangent bundle of a variety.
    Tangent { variety: String },
    /// Prolongation of a variety.
    Prolong { variety: String },
    /// Check that a section maps the variety into its prolongation.
    Validate {
        #[arg(required = true, num_args = 1..=2)]
        dvariety: Vec<String>,
    },
    /// Induced derivation of an expression, reduced modulo the ideal.
    Delta {
        /// D-variety reference followed by the expression.
        #[arg(required = true, num_args = 2..=3)]
        args: Vec<String>,
    },
    /// Is W a D-subvariety? W is a variety name or a comma-separated list.
    Dsub {
        #[arg(required = true, num_args = 2..=3)]
        args: Vec<String>,
    },
    /// Is a point (given as var=value pairs) a D-point?
    Dpoint {
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
    /// Product of two D-varieties.
    Product {
        #[arg(required = true, num_args = 2..=4)]
        args: Vec<String>,
    },
    /// δ-closure of the components of a decomposition of V.
    Components {
        #[arg(required = true, num_args = 2..)]
        args: Vec<String>,
    },
    /// Krull dimension of a variety (or of a D-variety's variety).
    Dim {
        #[arg(required = true, num_args = 1..=2)]
        target: Vec<String>,
    },
    /// Compile an ODE block into a D-variety.
    CompileOde { ode: String },
    /// Type signature (ℓ, g) of an ODE block.
    Signature { ode: String },
    /// Check that a map block is a D-rational map.
    DmapCheck { map: String },
    /// Polynomial first integrals up to a degree bound.
    FirstIntegrals {
        #[arg(required = true, num_args = 1..=2)]
        dvariety: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Darboux polynomials with cofactors.
    Darboux {
        #[arg(required = true, num_args = 1..=2)]
        dvariety: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        cofactor: u32,
    },
    /// Rational first integrals built from Darboux polynomials.
    RationalIntegrals {
        #[arg(required = true, num_args = 1..=2)]
        dvariety: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        cofactor: u32,
    },
    /// Is the map dominant?
    Dominant { map: String },
    /// Is the map generically finite?
    Genfinite { map: String },
}

/// A failure that ends the command with status `error`.
struct Fail(String);

impl From<DvarError> for Fail {
    fn from(e: DvarError) -> Self {
        Fail(describe(&e))
    }
}

impl From<dvar_core::PolyError> for Fail {
    fn from(e: dvar_core::PolyError) -> Self {
        Fail(e.to_string())
    }
}

fn describe(e: &DvarError) -> String {
    match e {
        DvarError::InvalidSection(checks) => {
            let gens: Vec<String> = checks.iter().map(|c| c.generator.to_string()).collect();
            format!("the section is not valid (fails on {})", gens.join(", "))
        }
        DvarError::NotIntoTarget(g) => format!("does not map into target: {g} does not vanish on the image"),
        DvarError::TargetNotPrime => "target not claimed irreducible".into(),
        DvarError::NotSubvariety(g) => format!("not a subvariety: {g} does not vanish on W"),
        other => other.to_string(),
    }
}

type Out = Result<CommandResult, Fail>;

/// Runs one command against a loaded document.
pub fn run_command(doc: &SessionDocument, command: &Command, certify: bool) -> CommandResult {
    let ctx = Ctx { doc, certify };
    match ctx.dispatch(command) {
        Ok(r) => r,
        Err(Fail(m)) => CommandResult::error(m),
    }
}

/// Parses `args` as a command line (without the program name) and runs it.
pub fn run_args<S: AsRef<str>>(doc: &SessionDocument, args: &[S]) -> CommandResult {
    let argv = std::iter::once("dvar").chain(args.iter().map(AsRef::as_ref));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run_command(doc, &cli.command, cli.certify),
        Err(e) => CommandResult::error(e.to_string().trim().to_string()),
    }
}

struct Ctx<'a> {
    doc: &'a SessionDocument,
    certify: bool,
}

fn poly_strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn checks_json(checks: &[GeneratorCheck]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"generator": c.generator.to_string(), "residue": c.residue.to_string(), "passed": c.passed}))
            .collect(),
    )
}

fn subvariety_json(r: &SubvarietyReport) -> Value {
    json!({"holds": r.holds, "checks": checks_json(&r.checks)})
}

fn section_json(d: &DVariety) -> Value {
    let mut m = Map::new();
    for (v, c) in d.ring().vars().iter().zip(d.section().components()) {
        m.insert(v.clone(), json!(c.to_string()));
    }
    Value::Object(m)
}

/// Reduction of `f` by a Gröbner basis of `gens`, with cofactors.
fn certificate(f: &Polynomial, gens: &[Polynomial]) -> Result<Value, Fail> {
    let gb = GroebnerBasis::compute(f.ring(), gens, MonomialOrder::GrevLex);
    let (_, cert) = ideal_member(f, gens)?;
    Ok(json!({
        "polynomial": f.to_string(),
        "basis": poly_strings(gb.gens()),
        "cofactors": poly_strings(&cert.cofactors),
        "remainder": cert.remainder.to_string(),
    }))
}

fn dim_json(d: &Dimension) -> Value {
    match d {
        Dimension::Dim(n) => json!(n),
        Dimension::Empty => json!("empty"),
    }
}

fn doubled_json(t: &DoubledVariety) -> Value {
    json!({"variables": t.ring().vars(), "generators": poly_strings(t.gens())})
}

impl Ctx<'_> {
    fn dispatch(&self, command: &Command) -> Out {
        match command {
            Command::Tangent { variety } => Ok(CommandResult::new(true, doubled_json(&tangent_bundle(self.variety(variety)?)))),
            Command::Prolong { variety } => Ok(CommandResult::new(true, doubled_json(&prolongation(self.variety(variety)?)))),
            Command::Validate { dvariety } => self.validate(dvariety),
            Command::Delta { args } => self.delta(args),
            Command::Dsub { args } => self.dsub(args),
            Command::Dpoint { args } => self.dpoint(args),
            Command::Product { args } => self.product(args),
            Command::Components { args } => self.components(args),
            Command::Dim { target } => self.dim(target),
            Command::CompileOde { ode } => self.compile_ode(ode),
            Command::Signature { ode } => {
                let o = self.ode(ode)?;
                let sig = type_signature(&o.spec);
                Ok(CommandResult::new(true, json!({"ell": sig.ell, "g": sig.g.to_string()})))
            }
            Command::DmapCheck { map } => {
                let f = self.map(map)?;
                let r = is_d_rational_map(&f)?;
                let coords: Vec<Value> = r
                    .coordinates
                    .iter()
                    .map(|c| json!({"target_var": c.target_var, "residue": c.residue.to_string(), "passed": c.passed}))
                    .collect();
                Ok(CommandResult::new(r.holds, json!({"holds": r.holds, "coordinates": coords})))
            }
            Command::FirstIntegrals { dvariety, degree } => self.first_integrals(dvariety, *degree),
            Command::Darboux {
                dvariety,
                degree,
                cofactor,
            } => self.darboux(dvariety, *degree, *cofactor),
            Command::RationalIntegrals {
                dvariety,
                degree,
                cofactor,
            } => self.rational_integrals(dvariety, *degree, *cofactor),
            Command::Dominant { map } => {
                let f = self.map(map)?;
                let yes = is_dominant(&f)?;
                let closure = image_closure(&f)?;
                let dim = krull_dimension(f.target().ring(), &closure)?;
                Ok(CommandResult::new(
                    yes,
                    json!({
                        "dominant": yes,
                        "image_closure": poly_strings(&closure),
                        "image_dimension": dim_json(&dim),
                        "target_dimension": f.target().variety().dimension(),
                    }),
                ))
            }
            Command::Genfinite { map } => {
                let f = self.map(map)?;
                let yes = is_generically_finite(&f)?;
                let closure = image_closure(&f)?;
                let dim = krull_dimension(f.target().ring(), &closure)?;
                let source = f.source().variety().dimension();
                // dimension of a generic fibre, the witness when it is positive
                let fibre = dim.as_usize().map(|d| source.saturating_sub(d));
                Ok(CommandResult::new(
                    yes,
                    json!({
                        "generically_finite": yes,
                        "image_closure": poly_strings(&closure),
                        "image_dimension": dim_json(&dim),
                        "fibre_dimension": fibre,
                        "source_dimension": source,
                    }),
                ))
            }
        }
    }

    fn variety(&self, name: &str) -> Result<&Variety, Fail> {
        self.doc
            .varieties
            .get(name)
            .ok_or_else(|| Fail(format!("unknown variety `{name}`")))
    }

    fn ode(&self, name: &str) -> Result<&crate::document::OdeDecl, Fail> {
        self.doc
            .odes
            .get(name)
            .ok_or_else(|| Fail(format!("unknown ode `{name}`")))
    }

    /// Resolves a D-variety reference at the front of `args`, without
    /// validating. Returns the pair and the number of arguments used.
    fn pair(&self, args: &[String]) -> Result<(Variety, Section, usize), Fail> {
        let first = args.first().ok_or_else(|| Fail("missing D-variety".into()))?;
        if let Some(v) = self.doc.varieties.get(first) {
            let s = args
                .get(1)
                .ok_or_else(|| Fail(format!("missing section on `{first}`")))?;
            let decl = self
                .doc
                .sections
                .get(s)
                .ok_or_else(|| Fail(format!("unknown section `{s}`")))?;
            if decl.variety != *first {
                return Err(Fail(format!("section `{s}` is not on `{first}`")));
            }
            return Ok((v.clone(), decl.section.clone(), 2));
        }
        if let Some((v, s)) = self.doc.section_pair(first) {
            return Ok((v.clone(), s.clone(), 1));
        }
        if let Some(o) = self.doc.odes.get(first) {
            let d = &o.compiled.dvariety;
            return Ok((d.variety().clone(), d.section().clone(), 1));
        }
        Err(Fail(format!("`{first}` is not a variety, section or ode")))
    }

    fn dvariety(&self, args: &[String]) -> Result<(DVariety, usize), Fail> {
        let (v, s, used) = self.pair(args)?;
        Ok((validate_section(&v, &s)?, used))
    }

    fn only(&self, args: &[String]) -> Result<DVariety, Fail> {
        let (d, used) = self.dvariety(args)?;
        if used != args.len() {
            return Err(Fail(format!("unexpected argument `{}`", args[used])));
        }
        Ok(d)
    }

    fn map(&self, name: &str) -> Result<RationalMap, Fail> {
        let decl = self
            .doc
            .maps
            .get(name)
            .ok_or_else(|| Fail(format!("unknown map `{name}`")))?;
        let end = |n: &str| -> Result<DVariety, Fail> {
            match self.doc.dvariety(n) {
                Some(r) => Ok(r?),
                None => Err(Fail(format!("unknown section or ode `{n}`"))),
            }
        };
        Ok(RationalMap::new(end(&decl.source)?, end(&decl.target)?, decl.components.clone())?)
    }

    fn validate(&self, args: &[String]) -> Out {
        let (v, s, used) = self.pair(args)?;
        if used != args.len() {
            return Err(Fail(format!("unexpected argument `{}`", args[used])));
        }
        let spec = DerivationSpec::new(v.ring(), s.components().to_vec())?;
        let ok = match validate_section(&v, &s) {
            Ok(_) => true,
            Err(DvarError::InvalidSection(_)) => false,
            Err(e) => return Err(e.into()),
        };
        let checks: Vec<GeneratorCheck> = v
            .gens()
            .iter()
            .map(|f| {
                let r = spec.apply(f);
                GeneratorCheck {
                    generator: f.clone(),
                    passed: v.vanishes(&r),
                    residue: v.reduce(&r),
                }
            })
            .collect();
        let mut res = CommandResult::new(ok, json!({"valid": ok, "checks": checks_json(&checks)}));
        if self.certify {
            let certs = v
                .gens()
                .iter()
                .map(|f| certificate(&spec.apply(f), v.gens()))
                .collect::<Result<Vec<_>, _>>()?;
            res.certificates = Some(Value::Array(certs));
        }
        Ok(res)
    }

    fn delta(&self, args: &[String]) -> Out {
        let (d, used) = self.dvariety(args)?;
        let rest = &args[used..];
        let [text] = rest else {
            return Err(Fail("expected one expression after the D-variety".into()));
        };
        let f = parse_polynomial(text, d.ring()).map_err(|e| Fail(format!("{e}")))?;
        let value = induced_derivation(&d, &f)?;
        let mut res = CommandResult::new(true, json!({"expression": f.to_string(), "value": value.to_string()}));
        if self.certify {
            res.certificates = Some(certificate(&d.spec().apply(&f), d.variety().gens())?);
        }
        Ok(res)
    }

    /// A variety name (in the right ring) or an inline generator list.
    fn generators(&self, text: &str, d: &DVariety) -> Result<Vec<Polynomial>, Fail> {
        if let Some(w) = self.doc.varieties.get(text) {
            if w.ring().vars() != d.ring().vars() {
                return Err(Fail(format!("`{text}` lives in a different ring")));
            }
            return w
                .gens()
                .iter()
                .map(|g| g.rename_into(d.ring()).map_err(Fail::from))
                .collect();
        }
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_polynomial(t.trim(), d.ring()).map_err(|e| Fail(format!("{e}"))))
            .collect()
    }

    fn dsub(&self, args: &[String]) -> Out {
        let (d, used) = self.dvariety(args)?;
        let [w] = &args[used..] else {
            return Err(Fail("expected one subvariety after the D-variety".into()));
        };
        let gens = self.generators(w, &d)?;
        let r = is_d_subvariety(&d, &gens)?;
        let mut res = CommandResult::new(r.holds, subvariety_json(&r));
        if self.certify {
            let mut all = gens.clone();
            all.extend(d.variety().gens().iter().cloned());
            let certs = gens
                .iter()
                .map(|h| certificate(&d.spec().apply(h), &all))
                .collect::<Result<Vec<_>, _>>()?;
            res.certificates = Some(Value::Array(certs));
        }
        Ok(res)
    }

    fn dpoint(&self, args: &[String]) -> Out {
        let (d, used) = self.dvariety(args)?;
        let mut point = BTreeMap::new();
        for a in &args[used..] {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| Fail(format!("expected var=value, found `{a}`")))?;
            let value = self.doc.parse_point_value(v.trim()).map_err(|e| Fail(format!("{e}")))?;
            point.insert(k.trim().to_string(), value);
        }
        let r = is_d_point(&d, &point)?;
        let ring = d.ring();
        let mism: Vec<Value> = r
            .mismatches
            .iter()
            .map(|m| {
                json!({
                    "var": m.var,
                    "section_value": format_field_element(&m.section_value, ring),
                    "delta_value": format_field_element(&m.delta_value, ring),
                })
            })
            .collect();
        Ok(CommandResult::new(r.holds, json!({"holds": r.holds, "mismatches": mism})))
    }

    fn product(&self, args: &[String]) -> Out {
        let (d1, used) = self.dvariety(args)?;
        let d2 = self.only(&args[used..])?;
        let p = product(&d1, &d2)?;
        Ok(CommandResult::new(
            true,
            json!({
                "variables": p.ring().vars(),
                "generators": poly_strings(p.variety().gens()),
                "section": section_json(&p),
                "dimension": generic_type_dimension(&p),
            }),
        ))
    }

    fn components(&self, args: &[String]) -> Out {
        let (v, s, used) = self.pair(args)?;
        if used == args.len() {
            return Err(Fail("expected at least one component".into()));
        }
        let probe = validate_section(&v, &s);
        let comps: Vec<Vec<Polynomial>> = match &probe {
            Ok(d) => args[used..]
                .iter()
                .map(|a| self.generators(a, d))
                .collect::<Result<_, _>>()?,
            Err(DvarError::InvalidSection(_)) => args[used..]
                .iter()
                .map(|a| {
                    a.split(',')
                        .map(|t| parse_polynomial(t.trim(), v.ring()).map_err(|e| Fail(format!("{e}"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?,
            Err(e) => return Err(Fail(describe(e))),
        };
        match components_delta_check_ambient(&v, &s, &comps)? {
            ComponentsReport::AmbientFailure(fails) => Ok(CommandResult::new(
                false,
                json!({"holds": false, "ambient_failure": checks_json(&fails)}),
            )),
            r @ ComponentsReport::Components(_) => {
                let ComponentsReport::Components(reports) = &r else { unreachable!() };
                let items: Vec<Value> = reports
                    .iter()
                    .zip(&comps)
                    .map(|(rep, c)| {
                        let mut o = subvariety_json(rep);
                        o["generators"] = json!(poly_strings(c));
                        o
                    })
                    .collect();
                Ok(CommandResult::new(r.holds(), json!({"holds": r.holds(), "components": items})))
            }
        }
    }

    fn dim(&self, target: &[String]) -> Out {
        if let [name] = target {
            if let Some(v) = self.doc.varieties.get(name) {
                return Ok(CommandResult::new(true, json!({"dimension": v.dimension()})));
            }
        }
        let d = self.only(target)?;
        Ok(CommandResult::new(true, json!({"dimension": generic_type_dimension(&d)})))
    }

    fn compile_ode(&self, name: &str) -> Out {
        let o = self.ode(name)?;
        let c = &o.compiled;
        let d = &c.dvariety;
        let section: Map<String, Value> = section_by_name(c)
            .into_iter()
            .map(|(k, v)| (k, json!(v.to_string())))
            .collect();
        Ok(CommandResult::new(
            true,
            json!({
                "variables": d.ring().vars(),
                "generators": poly_strings(d.variety().gens()),
                "section": section,
                "jets": c.jets,
                "localizer": c.localizer,
                "valid": true,
                "dimension": generic_type_dimension(d),
            }),
        ))
    }

    fn first_integrals(&self, args: &[String], degree: u32) -> Out {
        let d = self.only(args)?;
        let fi = polynomial_first_integrals(&d, degree)?;
        let mut res = CommandResult::new(
            true,
            json!({"degree_bound": fi.degree_bound, "basis": poly_strings(&fi.basis)}),
        );
        if self.certify {
            let certs = fi
                .basis
                .iter()
                .map(|p| certificate(&d.spec().apply(p), d.variety().gens()))
                .collect::<Result<Vec<_>, _>>()?;
            res.certificates = Some(Value::Array(certs));
        }
        Ok(res)
    }

    fn darboux(&self, args: &[String], degree: u32, cofactor: u32) -> Out {
        let d = self.only(args)?;
        let s = darboux_polynomials(&d, degree, cofactor)?;
        let items: Vec<Value> = s
            .polynomials
            .iter()
            .map(|dp| json!({"p": dp.p.to_string(), "cofactor": dp.cofactor.to_string()}))
            .collect();
        let mut res = CommandResult::new(true, json!({"polynomials": items, "unresolved": s.unresolved}));
        if self.certify {
            let certs = s
                .polynomials
                .iter()
                .map(|dp| certificate(&(&d.spec().apply(&dp.p) - &(&dp.cofactor * &dp.p)), d.variety().gens()))
                .collect::<Result<Vec<_>, _>>()?;
            res.certificates = Some(Value::Array(certs));
        }
        Ok(res)
    }

    fn rational_integrals(&self, args: &[String], degree: u32, cofactor: u32) -> Out {
        let d = self.only(args)?;
        let ri = rational_first_integrals(&d, degree, cofactor)?;
        let items: Vec<String> = ri.iter().map(|f| f.to_string()).collect();
        Ok(CommandResult::new(true, json!({"integrals": items})))
    }
}
