//! Command-line surface: dimension tables, verification suites and mass
//! matrix assembly on small meshes.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or input error, 3 missing
//! edge length, 4 degenerate geometry.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{SimplicialComplex, Simplex};
use crate::dofs::{
    canonical_dof_count, canonical_pairing_block, d_matrix, expected_dof_count, is_symmetric_weakly_diagonally_dominant,
    small_dof_matrix, small_dof_subset,
};
use crate::error::{Error, Result};
use crate::forms::random_interior_point;
use crate::linalg::RatMatrix;
use crate::metric::EdgeMetric;
use crate::rational::{binomial, exact_sqrt, format_rational, int, parse_rational, to_f64, Rational};
use crate::resolve::{geometric_decomposition, resolution_diff, resolution_pminus, resolution_pminus0, ResolutionReport};
use crate::whitney::{dim_pminus, interior_degree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISSING: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "feec", about = "Trimmed polynomial differential forms on simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension table: r, k, dim P_{r-1}⊗C^k, dim P⁻_{r-1}Λ^{k+1}, dim P⁻_rΛ^k.
    Dims {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
        rmax: u32,
    },
    /// Run exact verification suites on the reference n-simplex.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        r: u32,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Seed for the sampled points of the positivity suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Assemble the mass matrix of the global P⁻_rΛ^k basis on a mesh.
    Mass {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        r: u32,
        #[arg(long)]
        k: u32,
        /// Print exact entries as sums of p/q*sqrt(m/n) terms.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Resolutions,
    Dofs,
    Positivity,
    All,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Dims { n, rmax } => {
            let _ = write!(out, "{}", dims_table(n as usize, rmax as usize));
            Ok(EXIT_OK)
        }
        Command::Verify { n, r, suite, seed } => {
            let lines = verify(n as usize, r as usize, suite, seed);
            let mut ok = true;
            for l in &lines {
                ok &= l.passed;
                let _ = writeln!(out, "{l}");
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Mass { mesh, r, k, exact } => std::fs::read_to_string(&mesh)
            .map_err(|e| Error::Parse(format!("{}: {e}", mesh.display())))
            .and_then(|text| Mesh::parse(&text))
            .and_then(|m| assemble_mass(&m, r as usize, k as usize))
            .map(|m| {
                let _ = write!(out, "{}", if exact { m.to_exact_csv() } else { m.to_csv() });
                EXIT_OK
            }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MissingLength(..) => EXIT_MISSING,
        Error::Degenerate(_) => EXIT_DEGENERATE,
        Error::Verification(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// TSV with header `r k tensor pminus_next pminus`, one row per (r, k).
pub fn dims_table(n: usize, rmax: usize) -> String {
    let mut s = String::from("r\tk\tdim_P(r-1)xC(k)\tdim_Pminus(r-1,k+1)\tdim_Pminus(r,k)\n");
    for r in 1..=rmax {
        for k in 0..=n {
            let tensor = binomial(n + r - 1, n) * binomial(n + 1, k + 1);
            let next = if r >= 2 { dim_pminus(n, r - 1, k + 1) } else { 0 };
            s.push_str(&format!("{r}\t{k}\t{tensor}\t{next}\t{}\n", dim_pminus(n, r, k)));
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub passed: bool,
    pub name: String,
    pub detail: String,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn resolution_line(rep: Result<ResolutionReport>, name: String) -> CheckLine {
    match rep {
        Ok(rep) => {
            let dims: Vec<String> = rep.stages.iter().map(|s| s.domain_dim.to_string()).collect();
            let ranks: Vec<String> = rep.stages.iter().map(|s| s.rank.to_string()).collect();
            let detail = if rep.passed() {
                format!("dims {} ranks {} onto {}", dims.join("/"), ranks.join("/"), rep.target_dim)
            } else {
                rep.failures.join("; ")
            };
            CheckLine { passed: rep.passed(), name: rep.name, detail }
        }
        Err(e) => CheckLine { passed: false, name, detail: e.to_string() },
    }
}

/// Runs the selected suites on the reference n-simplex.
pub fn verify(n: usize, r: usize, suite: Suite, seed: u64) -> Vec<CheckLine> {
    let u = Simplex::standard(n);
    let mut lines = Vec::new();
    if matches!(suite, Suite::Resolutions | Suite::All) {
        for k in 0..=n {
            lines.push(resolution_line(resolution_pminus(&u, r, k).map(|x| x.verify()), format!("Pminus(n={n},r={r},k={k})")));
            if interior_degree(n, r, k).is_some() {
                lines.push(resolution_line(
                    resolution_pminus0(&u, r, k).map(|x| x.verify()),
                    format!("Pminus0(n={n},r={r},k={k})"),
                ));
            }
            if k < n {
                lines.push(resolution_line(resolution_diff(&u, r - 1, k).map(|x| x.verify()), format!("Diff(n={n},q={},k={k})", r - 1)));
            }
        }
    }
    if matches!(suite, Suite::Dofs | Suite::All) {
        for k in 0..=n {
            lines.push(canonical_line(&u, r, k));
            lines.push(small_line(&u, r, k));
        }
        lines.push(subset_line(&u, r));
    }
    if matches!(suite, Suite::Positivity | Suite::All) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..=n {
            lines.push(positivity_line(&u, k, 25, &mut rng));
        }
    }
    lines
}

fn canonical_line(u: &Simplex, r: usize, k: usize) -> CheckLine {
    let name = format!("canonical-dofs(n={},r={r},k={k})", u.dim());
    let mut bad = Vec::new();
    for t in u.all_faces().iter().filter(|t| t.dim() >= k) {
        match canonical_pairing_block(t, r, k) {
            Ok(b) if b.nrows() == b.ncols() && b.rank() == b.nrows() => {}
            Ok(b) => bad.push(format!("block on {:?} is {}x{} of rank {}", t.vertices(), b.nrows(), b.ncols(), b.rank())),
            Err(e) => bad.push(e.to_string()),
        }
    }
    let count = canonical_dof_count(u, r, k);
    let expected = expected_dof_count(u, r, k);
    match count {
        Ok(c) if c == expected && bad.is_empty() => {
            CheckLine { passed: true, name, detail: format!("all face blocks invertible, {c} dofs = dim") }
        }
        Ok(c) => {
            bad.push(format!("{c} dofs for dimension {expected}"));
            CheckLine { passed: false, name, detail: bad.join("; ") }
        }
        Err(e) => CheckLine { passed: false, name, detail: e.to_string() },
    }
}

fn small_line(u: &Simplex, r: usize, k: usize) -> CheckLine {
    let name = format!("small-dofs(n={},r={r},k={k})", u.dim());
    let expected = dim_pminus(u.dim(), r, k);
    match small_dof_matrix(u, r, k) {
        Ok(m) => {
            let rank = m.rank();
            CheckLine { passed: rank == expected, name, detail: format!("{} rows of rank {rank}, dim {expected}", m.nrows()) }
        }
        Err(e) => CheckLine { passed: false, name, detail: e.to_string() },
    }
}

fn subset_line(u: &Simplex, r: usize) -> CheckLine {
    let n = u.dim();
    let name = format!("small-dof-subset(n={n},r={r})");
    match small_dof_subset(u, r) {
        Ok(sel) => {
            let sizes: Vec<usize> = sel.iter().map(|s| s.selection.nrows()).collect();
            let dims: Vec<usize> = (0..=n).map(|k| dim_pminus(n, r, k)).collect();
            CheckLine {
                passed: sizes == dims,
                name,
                detail: format!("selected {sizes:?}, dims {dims:?}"),
            }
        }
        Err(e) => CheckLine { passed: false, name, detail: e.to_string() },
    }
}

fn positivity_line(u: &Simplex, k: usize, samples: usize, rng: &mut ChaCha8Rng) -> CheckLine {
    let n = u.dim();
    let name = format!("positivity(n={n},k={k})");
    let mut dominant = 0;
    for _ in 0..samples {
        let x = random_interior_point(rng, n);
        match d_matrix(u, k, &x) {
            Ok(d) if d == d.transpose() && d.is_positive_semidefinite() => {
                dominant += usize::from(is_symmetric_weakly_diagonally_dominant(&d));
            }
            Ok(_) => {
                let xs: Vec<String> = x.iter().map(format_rational).collect();
                return CheckLine { passed: false, name, detail: format!("D(x) not symmetric PSD at x = ({})", xs.join(", ")) };
            }
            Err(e) => return CheckLine { passed: false, name, detail: e.to_string() },
        }
    }
    CheckLine {
        passed: true,
        name,
        detail: format!("D(x) symmetric PSD at {samples} points; weakly diagonally dominant at {dominant}"),
    }
}

/// Plain-line mesh: `vertex <id>`, `simplex <ids…>`, `length <i> <j> <v>` or
/// `sqlength <i> <j> <v²>`; `#` starts a comment.
#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub vertices: BTreeSet<usize>,
    pub cells: Vec<Simplex>,
    /// Squared lengths keyed by (min, max) vertex id.
    pub sq_lengths: BTreeMap<(usize, usize), Rational>,
}

impl Mesh {
    pub fn parse(text: &str) -> Result<Mesh> {
        let mut mesh = Mesh::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {raw:?}", no + 1));
            let mut words = line.split_whitespace();
            let id = |w: &str| w.parse::<usize>().map_err(|_| bad("bad vertex id"));
            match words.next() {
                Some("vertex") => {
                    let ids: Vec<&str> = words.collect();
                    if ids.len() != 1 {
                        return Err(bad("expected one vertex id"));
                    }
                    mesh.vertices.insert(id(ids[0])?);
                }
                Some("simplex") => {
                    let ids = words.map(id).collect::<Result<Vec<_>>>()?;
                    let s = Simplex::from_enumeration(&ids).map_err(|_| bad("repeated vertex"))?;
                    if ids.len() < 2 {
                        return Err(bad("a cell needs at least two vertices"));
                    }
                    mesh.cells.push(Simplex::new(s.vertices()).map_err(|e| bad(&e.to_string()))?);
                }
                Some(kw @ ("length" | "sqlength")) => {
                    let w: Vec<&str> = words.collect();
                    if w.len() != 3 {
                        return Err(bad("expected two vertex ids and a value"));
                    }
                    let (i, j) = (id(w[0])?, id(w[1])?);
                    if i == j {
                        return Err(bad("edge endpoints coincide"));
                    }
                    let v = parse_rational(w[2]).map_err(|_| bad("bad length value"))?;
                    if !v.is_positive() {
                        return Err(bad("lengths must be positive"));
                    }
                    let sq = if kw == "length" { &v * &v } else { v };
                    mesh.sq_lengths.insert((i.min(j), i.max(j)), sq);
                }
                _ => return Err(bad("unknown record")),
            }
        }
        if mesh.cells.is_empty() {
            return Err(Error::Parse("mesh has no simplex records".into()));
        }
        let dim = mesh.cells[0].dim();
        for c in &mesh.cells {
            if c.dim() != dim {
                return Err(Error::Parse("all simplex records must have the same dimension".into()));
            }
            if let Some(v) = c.vertices().iter().find(|v| !mesh.vertices.contains(v)) {
                return Err(Error::Parse(format!("vertex {v} is used but not declared")));
            }
        }
        mesh.cells.sort();
        mesh.cells.dedup();
        Ok(mesh)
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(&self.cells)
    }

    /// Edge metric of a cell; fails on the first edge without a length.
    pub fn metric(&self, cell: &Simplex) -> Result<EdgeMetric> {
        let vs = cell.vertices();
        for (a, &i) in vs.iter().enumerate() {
            for &j in &vs[a + 1..] {
                if !self.sq_lengths.contains_key(&(i, j)) {
                    return Err(Error::MissingLength(i, j));
                }
            }
        }
        EdgeMetric::from_fn(cell, |a, b| {
            let (i, j) = (vs[a].min(vs[b]), vs[a].max(vs[b]));
            if i == j {
                Rational::zero()
            } else {
                self.sq_lengths[&(i, j)].clone()
            }
        })
    }
}

/// Exact value Σ c·sqrt(v) grouped by the squared volume v (1 for rational terms).
pub type SurdSum = BTreeMap<Rational, Rational>;

#[derive(Clone, Debug)]
pub struct GlobalMass {
    /// Face carrying each basis function and its index within that face.
    pub labels: Vec<(Simplex, usize)>,
    pub entries: Vec<Vec<SurdSum>>,
}

fn surd_add(s: &mut SurdSum, coeff: &Rational, vol_sq: &Rational) {
    if coeff.is_zero() {
        return;
    }
    let (c, v) = match exact_sqrt(vol_sq) {
        Some(root) => (coeff * root, int(1)),
        None => (coeff.clone(), vol_sq.clone()),
    };
    let e = s.entry(v.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        s.remove(&v);
    }
}

fn surd_f64(s: &SurdSum) -> f64 {
    s.iter().fold(0.0, |acc, (v, c)| acc + to_f64(c) * to_f64(v).sqrt())
}

fn surd_exact(s: &SurdSum) -> String {
    if s.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = s
        .iter()
        .map(|(v, c)| if *v == int(1) { format_rational(c) } else { format!("{}*sqrt({})", format_rational(c), format_rational(v)) })
        .collect();
    terms.join(" + ")
}

impl GlobalMass {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|row| row.iter().map(surd_f64).collect()).collect()
    }

    fn header(&self) -> String {
        let ls: Vec<String> = self
            .labels
            .iter()
            .map(|(f, i)| {
                let vs: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
                format!("{}:{i}", vs.join("-"))
            })
            .collect();
        format!("# basis (face:index), rows and columns in this order: {}\n", ls.join(" "))
    }

    /// CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = self.header();
        for row in self.to_f64() {
            let vs: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            s.push_str(&vs.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_exact_csv(&self) -> String {
        let mut s = self.header();
        for row in &self.entries {
            let vs: Vec<String> = row.iter().map(surd_exact).collect();
            s.push_str(&vs.join(","));
            s.push('\n');
        }
        s
    }
}

/// Mass matrix of the global basis given by the geometric decomposition:
/// interior basis elements of every face, extended to the cells containing it.
pub fn assemble_mass(mesh: &Mesh, r: usize, k: usize) -> Result<GlobalMass> {
    let complex = mesh.complex();
    if k > complex.dim() {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds mesh dimension {}", complex.dim())));
    }
    let metrics = mesh.cells.iter().map(|c| mesh.metric(c)).collect::<Result<Vec<_>>>()?;
    let dec = geometric_decomposition(&complex, r, k)?;
    let mut labels: Vec<(Simplex, usize)> = Vec::new();
    for (face, size) in &dec.blocks {
        labels.extend((0..*size).map(|i| (face.clone(), i)));
    }
    let p = dec.dim();
    let mut entries = vec![vec![SurdSum::new(); p]; p];
    for (cell, metric) in mesh.cells.iter().zip(&metrics) {
        let local: Vec<usize> = (0..p).filter(|&j| dec.columns[j].0.is_face_of(cell)).collect();
        let forms = local.iter().map(|&j| dec.columns[j].1.embed(cell)).collect::<Result<Vec<_>>>()?;
        let m = metric.mass_matrix(&forms)?;
        for (a, &i) in local.iter().enumerate() {
            for (b, &j) in local.iter().enumerate() {
                surd_add(&mut entries[i][j], &m.coeffs[(a, b)], &m.vol_sq);
            }
        }
    }
    Ok(GlobalMass { labels, entries })
}

/// Rational part of a mass matrix whose entries are all rational.
pub fn rational_part(m: &GlobalMass) -> Option<RatMatrix> {
    let rows = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| match s.len() {
                    0 => Some(Rational::zero()),
                    1 => s.get(&int(1)).cloned(),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(RatMatrix::from_rows(rows))
}
