//! The `tropcur` command line: JSON documents in, reports out.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 input error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::amoeba::{build_flm, one_sided_hausdorff, rescale, sample_amoeba, Window};
use crate::complexes::{build_complex, facet_star, is_balanced, is_strongly_extremal, WeightedComplex};
use crate::currents::{
    boundary_pairing, build_frames, closedness_certificate, default_frequencies, fourier_certificate,
    kernel_is_weight_line, rigidity_dimension, PairingQuery,
};
use crate::error::Error;
use crate::intersect::{mixed_monge_ampere, monge_ampere, stable_intersection_number, AtomicMeasure};
use crate::lattice::IntVector;
use crate::linalg::{self, format_point, format_rat, parse_rat, Rat};
use crate::polyhedra::Polyhedron;
use crate::toric::{binomial_system, projective_degree};
use crate::troppoly::{hypersurface, TropicalPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDocument {
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub rays: Vec<Vec<i64>>,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDocument {
    pub ambient: usize,
    pub dim: usize,
    pub cells: Vec<CellDocument>,
}

/// A coefficient written either as a rational string or a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Text(String),
    Integer(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub exp: Vec<i64>,
    pub coef: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub n: usize,
    pub terms: Vec<TermDocument>,
}

impl CycleDocument {
    pub fn to_complex(&self) -> Result<WeightedComplex, Error> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let mut vertices = Vec::with_capacity(c.vertices.len());
            for v in &c.vertices {
                if v.len() != self.ambient {
                    return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
                }
                let pt: Option<Vec<Rat>> = v.iter().map(|s| parse_rat(s)).collect();
                vertices.push(pt.ok_or_else(|| Error::Invalid(format!("cell {i}: bad rational in {v:?}")))?);
            }
            let rays: Vec<IntVector> = c.rays.iter().map(|r| IntVector::from_i64s(r)).collect();
            let p = Polyhedron::from_generators(&vertices, &rays)?;
            if p.ambient() != self.ambient {
                return Err(Error::DimensionMismatch { expected: self.ambient, found: p.ambient() });
            }
            if p.dim() != self.dim {
                return Err(Error::NotPure { cell: i, expected: self.dim, found: p.dim() });
            }
            cells.push((p, c.weight));
        }
        build_complex(cells)
    }

    /// Cells in canonical order: sorted vertices, then sorted rays (lines as
    /// opposite ray pairs).
    pub fn from_complex(c: &WeightedComplex) -> Self {
        let mut cells: Vec<(Polyhedron, i64)> = c.cells().iter().map(|x| (x.polyhedron.clone(), x.weight)).collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        let cells = cells
            .into_iter()
            .map(|(p, weight)| CellDocument {
                vertices: p.vertices().iter().map(|v| v.iter().map(format_rat).collect()).collect(),
                rays: p
                    .generator_rays()
                    .iter()
                    .map(|r| r.entries().iter().map(|x| i64::try_from(x).expect("small ray entry")).collect())
                    .collect(),
                weight,
            })
            .collect();
        CycleDocument { ambient: c.ambient(), dim: c.dim(), cells }
    }
}

impl PolynomialDocument {
    pub fn to_polynomial(&self) -> Result<TropicalPolynomial, Error> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = match &t.coef {
                Coefficient::Integer(k) => Rat::from_integer((*k).into()),
                Coefficient::Text(s) => parse_rat(s).ok_or_else(|| Error::Invalid(format!("bad coefficient {s:?}")))?,
            };
            terms.push((IntVector::from_i64s(&t.exp), c));
        }
        TropicalPolynomial::new(self.n, terms)
    }

    pub fn from_polynomial(p: &TropicalPolynomial) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(e, c)| TermDocument {
                exp: e.entries().iter().map(|x| i64::try_from(x).expect("small exponent")).collect(),
                coef: Coefficient::Text(format_rat(c)),
            })
            .collect();
        PolynomialDocument { n: p.n(), terms }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tropcur", version, about = "Tropical cycles, currents and intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input JSON document.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a cycle document is a balanced complex.
    Validate(InputArgs),
    /// Closedness certificate from zero-frequency pairings.
    Certify(InputArgs),
    /// Strong extremality with per-facet rigidity.
    Extremal(InputArgs),
    /// Corner locus of a tropical polynomial, as a cycle document.
    Hyper {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monge-Ampère measure of a tropical polynomial.
    Ma(InputArgs),
    /// Mixed measure and stable intersection number of n polynomials.
    Intersect {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
    },
    /// One boundary pairing query.
    Pairing {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        facet: usize,
        /// Frequency, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        nu: Vec<i64>,
        /// 1-based index set, comma separated.
        #[arg(long = "J", value_delimiter = ',')]
        j: Vec<usize>,
    },
    /// Binomial equations of the toric sets attached to each cell.
    Binomials {
        #[arg(long)]
        input: PathBuf,
        /// Phase angles as fractions of a turn, one per completion column.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<String>,
    },
    /// Sample the amoeba of f_{l,1}, rescale by m and measure its distance to the hypersurface.
    Amoeba {
        #[arg(long)]
        input: PathBuf,
        /// Coefficient exponent scale; defaults to m.
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
        window: String,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Whitespace separated data file for plotting.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: format!("invalid input: {e}") }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        input_error(format!("malformed JSON in {} at line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn read_cycle(path: &Path) -> Result<WeightedComplex, Failure> {
    let doc: CycleDocument = read_json(path)?;
    Ok(doc.to_complex()?)
}

fn read_polynomial(path: &Path) -> Result<TropicalPolynomial, Failure> {
    let doc: PolynomialDocument = read_json(path)?;
    Ok(doc.to_polynomial()?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn format_ints(v: &IntVector) -> String {
    v.to_string()
}

fn format_measure(m: &AtomicMeasure, out: &mut String) {
    for (x, mass) in &m.atoms {
        let _ = writeln!(out, "atom {} mass {}", format_point(x), format_rat(mass));
    }
    let _ = writeln!(out, "total mass {}", format_rat(&m.total_mass()));
}

fn validate(c: &WeightedComplex, out: &mut String) -> i32 {
    let r = is_balanced(c);
    let _ = writeln!(out, "complex: n = {}, p = {}, {} cells, {} facets", c.ambient(), c.dim(), c.cells().len(), c.facets().len());
    for f in r.facets.iter().filter(|f| !f.defect.is_zero()) {
        let js: Vec<String> = f.failing_minors.iter().map(|j| format!("{j:?}")).collect();
        let _ = writeln!(out, "facet {}: defect {}; nonzero minors J = {}", f.facet, format_ints(&f.defect), js.join(" "));
    }
    if r.balanced {
        let _ = writeln!(out, "balanced");
        0
    } else {
        let _ = writeln!(out, "not balanced");
        1
    }
}

fn certify(c: &WeightedComplex, out: &mut String) -> i32 {
    let r = closedness_certificate(c);
    for w in &r.witnesses {
        let _ = writeln!(out, "facet {}: J = {:?}, pairing {}", w.facet, w.j, format_rat(&w.value));
    }
    let _ = writeln!(out, "agrees with balancing: {}", yes_no(r.agrees_with_balancing));
    if r.closed {
        let _ = writeln!(out, "closed");
        0
    } else {
        let _ = writeln!(out, "not closed");
        1
    }
}

/// Rational vector scaled to a primitive integer vector with positive first
/// nonzero entry.
fn normalized_direction(x: &[Rat]) -> IntVector {
    let v = linalg::primitive_from_rat(x);
    match v.entries().iter().find(|e| !num_traits::Zero::is_zero(*e)) {
        Some(e) if num_traits::Signed::is_negative(e) => -&v,
        _ => v,
    }
}

fn extremal(c: &WeightedComplex, out: &mut String) -> Result<i32, Failure> {
    let r = is_strongly_extremal(c);
    if !r.balanced {
        let _ = writeln!(out, "warning: complex is not balanced");
    }
    for f in &r.facets {
        let star = facet_star(c, f.facet)?;
        let rig = rigidity_dimension(&star);
        let mut line = if f.valency == r.expected_valency {
            format!("facet {}: valency {}", f.facet, f.valency)
        } else {
            format!("valency {} ≠ {} at facet {}", f.valency, r.expected_valency, f.facet)
        };
        let _ = write!(line, "; rigidity dim {}", rig.dim);
        if rig.dim == 1 {
            let _ = write!(line, ", kernel ∝ {}", normalized_direction(&rig.kernel[0]));
            if kernel_is_weight_line(&rig, &star) {
                line.push_str(" (weights)");
            }
        }
        let _ = write!(line, "; sub-independent {}; spanning {}", yes_no(f.sub_independent), yes_no(f.spanning));
        if star.ambient > star.dim {
            let frames = build_frames(c, &star)?;
            let ells = default_frequencies(star.ambient - star.dim);
            let fr = fourier_certificate(&star, &frames, &ells)?;
            let _ = write!(line, "; fourier obstruction {} ({} frequencies)", if fr.holds() { "holds" } else { "fails" }, ells.len());
        }
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "connected in codimension 1: {} (components: {})", yes_no(r.connected), r.components);
    let _ = writeln!(out, "valency {}: {}", r.expected_valency, yes_no(r.valency_ok));
    let _ = writeln!(out, "sub-independent: {}", yes_no(r.sub_independent));
    let _ = writeln!(out, "spanning: {}", yes_no(r.spanning));
    let _ = writeln!(out, "strongly extremal: {}", r.extremal);
    Ok(if r.extremal { 0 } else { 1 })
}

fn parse_window(s: &str) -> Result<Window, Failure> {
    let bad = || input_error(format!("bad window {s:?}, expected LO:HI"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(bad());
    }
    Ok(Window { lo, hi })
}

fn dispatch(cmd: Command, out: &mut String, err: &mut String) -> Result<i32, Failure> {
    match cmd {
        Command::Validate(a) => Ok(validate(&read_cycle(&a.input)?, out)),
        Command::Certify(a) => Ok(certify(&read_cycle(&a.input)?, out)),
        Command::Extremal(a) => extremal(&read_cycle(&a.input)?, out),
        Command::Hyper { input, output } => {
            let p = read_polynomial(&input)?;
            let c = hypersurface(&p)?;
            let json = serde_json::to_string_pretty(&CycleDocument::from_complex(&c)).expect("serializable") + "\n";
            match output {
                Some(path) => write_file(&path, &json)?,
                None => out.push_str(&json),
            }
            Ok(0)
        }
        Command::Ma(a) => {
            let p = read_polynomial(&a.input)?;
            format_measure(&monge_ampere(&p), out);
            Ok(0)
        }
        Command::Intersect { input } => {
            let ps: Vec<TropicalPolynomial> = input.iter().map(|p| read_polynomial(p)).collect::<Result<_, _>>()?;
            format_measure(&mixed_monge_ampere(&ps)?, out);
            let _ = writeln!(out, "stable intersection number = {}", format_rat(&stable_intersection_number(&ps)?));
            Ok(0)
        }
        Command::Pairing { input, facet, nu, j } => {
            let c = read_cycle(&input)?;
            let star = facet_star(&c, facet)?;
            let frames = build_frames(&c, &star)?;
            let q = PairingQuery::new(star, IntVector::from_i64s(&nu), j)?;
            let v = boundary_pairing(&q, &frames)?;
            let _ = writeln!(out, "facet {facet}, nu = {}, J = {:?}: pairing {}", q.nu, q.j, format_rat(&v));
            Ok(0)
        }
        Command::Binomials { input, theta } => {
            let c = read_cycle(&input)?;
            let phases: Vec<Rat> = theta
                .iter()
                .map(|s| parse_rat(s).ok_or_else(|| input_error(format!("bad angle {s:?}"))))
                .collect::<Result<_, _>>()?;
            for (i, cell) in c.cells().iter().enumerate() {
                let b = cell.polyhedron.direction_lattice();
                let basis: Vec<String> = b.vectors().iter().map(format_ints).collect();
                let _ = writeln!(out, "cell {i}: B = {{{}}}", basis.join(", "));
                let sys = binomial_system(&b, &phases)?;
                for bin in &sys.binomials {
                    let _ = writeln!(out, "  {bin}; xi = {}; degree {}", bin.xi, projective_degree(bin));
                }
            }
            Ok(0)
        }
        Command::Amoeba { input, l, m, grid, window, output, gnuplot } => {
            let window = parse_window(&window)?;
            if m == 0 {
                return Err(input_error("--m must be positive".into()));
            }
            let l = l.unwrap_or(m);
            let p = read_polynomial(&input)?;
            if p.n() != 2 {
                return Err(input_error("amoeba sampling needs n = 2".into()));
            }
            let c = hypersurface(&p)?;
            let sample = rescale(&sample_amoeba(&build_flm(&p, l, 1), grid, window)?, m);
            if sample.degenerate_fibers > 0 {
                let _ = writeln!(err, "warning: skipped {} degenerate fibers", sample.degenerate_fibers);
            }
            let mut csv = String::from("x1,x2\n");
            for pt in &sample.points {
                let _ = writeln!(csv, "{:.16e},{:.16e}", pt[0], pt[1]);
            }
            match output {
                Some(path) => write_file(&path, &csv)?,
                None => out.push_str(&csv),
            }
            if let Some(path) = gnuplot {
                let mut dat = String::from("# x1 x2\n");
                for pt in &sample.points {
                    let _ = writeln!(dat, "{:.16e} {:.16e}", pt[0], pt[1]);
                }
                write_file(&path, &dat)?;
            }
            let d = one_sided_hausdorff(&sample, &c, window)?;
            let _ = writeln!(err, "m,distance");
            let _ = writeln!(err, "{m},{d:.16e}");
            let codim = (c.ambient() - c.dim()) as u32;
            let _ = writeln!(err, "current normalization 1/m^(n-p) = 1/{}", u64::from(m).pow(codim));
            Ok(0)
        }
    }
}

/// Runs the command line with `args` (including the program name), writing
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut report = String::new();
    let mut diagnostics = String::new();
    let code = match dispatch(cli.command, &mut report, &mut diagnostics) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(diagnostics, "error: {}", f.message);
            f.code
        }
    };
    let _ = out.write_all(report.as_bytes());
    let _ = err.write_all(diagnostics.as_bytes());
    code
}
