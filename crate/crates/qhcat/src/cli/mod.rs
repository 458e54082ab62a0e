//! Command-line frontend. [`run`] parses arguments, runs one command and returns the rendered
//! report with its exit code: 0 when every certificate passes, 1 when one fails, 2 on bad input.

mod spec;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use spec::{ArrowSpec, Built, FamilySpec, QuiverSpec, SpecFile, TermSpec, WindowSpec};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::functors::{hom_dim, ideal_module, projective_cover, render_grid, FunctorModule};
use crate::meshcat::{truncation, PresentedCategory, QuiverWithRelations};
use crate::qhcheck::{
    check_delta_lemmas, check_qh, is_delta_filtered, right_approximation, standard_family,
    trace_filtration, Certificate, CertificateKind, Evidence, Filtration,
};
use crate::quiver::Vertex;
use crate::tensorqh::verify_tensor_qh;
use crate::tilting_za::{
    build_t, row_family, verify_ses, verify_t_in_fdelta, verify_tilting, ZaWindow,
};

#[derive(Parser, Debug)]
#[command(
    name = "qhcat",
    version,
    about = "Exact checks for quasi-hereditary K-linear categories"
)]
pub struct Cli {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Grid)]
    pub emit: Emit,
    /// Append wall-clock timing to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// JSON spec file with a builtin family or an explicit quiver.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Builtin family: za-inf, za-inf-inf, zd-inf, n-d4, n-e6, ...
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Labelled filtration of the family: standard or boxes.
    #[arg(long, global = true)]
    pub filtration: Option<String>,
    /// Number of filtration layers.
    #[arg(long, global = true)]
    pub layers: Option<usize>,
    /// Column range `A..B` of the za-inf row filtration.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub col_range: Option<String>,
    /// Diagram window `T0..T1xN0..N1` in ambient time and node coordinates.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Ground field: q or fp:<prime>.
    #[arg(long, global = true)]
    pub field: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Grid,
    Dot,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Quasi-hereditary check by both routes, then the standard-module lemma sweep.
    CheckQh,
    /// Standard and costandard modules of one layer.
    Delta {
        #[arg(long)]
        layer: usize,
    },
    /// Trace filtration of a module and its Delta-filtration certificate.
    Trace {
        /// `rep:X`, `delta:X`, `nabla:X` or `simple:X`.
        #[arg(long)]
        target: String,
    },
    /// The functor I_B(-,X) for B = layers 1..=layer, its projective cover and the kernel.
    Ideal {
        #[arg(long)]
        layer: usize,
        #[arg(long)]
        target: String,
    },
    /// The T(r,s) family on a rectangle of the za-inf quiver.
    Tilting {
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, default_value_t = 8)]
        cols: usize,
    },
    /// Quasi-hereditary check of a tensor product.
    Tensor {
        /// `a<N>` for the linear path category A_N ordered sink first, or a spec file.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Right F(Delta)-approximation of a module.
    Approx {
        #[arg(long)]
        target: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagram {
    pub title: String,
    pub grid: String,
    #[serde(skip)]
    pub dot: String,
}

/// Deterministic for fixed input unless timing is requested.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub passed: bool,
    pub certificates: Vec<Certificate>,
    pub diagrams: Vec<Diagram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    #[serde(skip)]
    pub category_dot: String,
}

impl Report {
    fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, emit: Emit) -> String {
        match emit {
            Emit::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Emit::Dot => {
                if self.diagrams.is_empty() {
                    self.category_dot.clone()
                } else {
                    self.diagrams.iter().map(|d| d.dot.as_str()).collect()
                }
            }
            Emit::Grid => {
                let mut out = String::new();
                let verdict = if self.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "qhcat {} : {verdict}", self.command);
                let _ = writeln!(out, "input {}", self.input_digest);
                for c in &self.certificates {
                    out.push('\n');
                    let _ = write!(out, "{c}");
                }
                for d in &self.diagrams {
                    let _ = write!(out, "\n== {} ==\n{}", d.title, d.grid);
                }
                if let Some(ms) = self.timing_ms {
                    let _ = writeln!(out, "\ntime {ms} ms");
                }
                out
            }
        }
    }
}

/// Rendered output and exit status of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            Outcome {
                stdout: report.render(cli.emit),
                stderr: String::new(),
                code: report.exit_code(),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}

fn parse_range(s: &str) -> Result<[i64; 2]> {
    let bad = || Error::Invalid(format!("bad range `{s}` (expected A..B)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok([
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ])
}

/// The spec file, with command-line flags layered over it.
pub fn resolve_spec(input: &InputArgs) -> Result<SpecFile> {
    let mut spec = match &input.spec {
        Some(path) => read_spec(path)?,
        None => SpecFile {
            field: "q".into(),
            family: None,
            quiver: None,
            layers: None,
        },
    };
    let overrides = input.family.is_some()
        || input.filtration.is_some()
        || input.layers.is_some()
        || input.col_range.is_some()
        || input.window.is_some();
    if overrides && spec.quiver.is_some() {
        return Err(Error::Invalid(
            "family flags cannot be combined with an explicit quiver".into(),
        ));
    }
    if overrides || spec.family.is_some() {
        let mut fam = spec.family.take().unwrap_or(FamilySpec {
            name: String::new(),
            filtration: "standard".into(),
            layers: 4,
            cols: None,
            window: None,
        });
        if let Some(name) = &input.family {
            fam.name = name.clone();
        }
        if let Some(f) = &input.filtration {
            fam.filtration = f.clone();
        }
        if let Some(l) = input.layers {
            fam.layers = l;
        }
        if let Some(c) = &input.col_range {
            fam.cols = Some(parse_range(c)?);
        }
        if let Some(w) = &input.window {
            fam.window = Some(WindowSpec::parse(w)?);
        }
        if fam.name.is_empty() {
            return Err(Error::Invalid(
                "no family given (use --family or --spec)".into(),
            ));
        }
        spec.family = Some(fam);
    }
    if let Some(f) = &input.field {
        spec.field = f.clone();
    }
    if spec.family.is_none() && spec.quiver.is_none() {
        return Err(Error::Invalid(
            "no category given (use --family or --spec)".into(),
        ));
    }
    Ok(spec)
}

pub fn read_spec(path: &std::path::Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn digest(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckQh => "check-qh",
        Command::Delta { .. } => "delta",
        Command::Trace { .. } => "trace",
        Command::Ideal { .. } => "ideal",
        Command::Tilting { .. } => "tilting",
        Command::Tensor { .. } => "tensor",
        Command::Approx { .. } => "approx",
    }
}

fn report(
    command: &Command,
    inputs: &[String],
    certificates: Vec<Certificate>,
    diagrams: Vec<Diagram>,
    category_dot: String,
) -> Report {
    let mut parts = vec![format!("{command:?}")];
    parts.extend(inputs.iter().cloned());
    Report {
        command: command_name(command).into(),
        input_digest: digest(&parts),
        passed: certificates.iter().all(|c| c.passed),
        certificates,
        diagrams,
        timing_ms: None,
        category_dot,
    }
}

fn module_dot(m: &FunctorModule, title: &str) -> String {
    let c = m.category();
    let mut out = format!(
        "digraph \"{}\" {{\n  rankdir=LR;\n",
        title.replace('"', "'")
    );
    for x in 0..c.len() {
        let d = m.dim(x);
        let label = match d {
            0 => "0".to_string(),
            1 => "K".to_string(),
            d => format!("K{d}"),
        };
        let _ = match c.coords(x) {
            Some(v) => writeln!(
                out,
                "  v{x} [label=\"{}\\n{label}\", pos=\"{},{}!\"];",
                c.name(x),
                v.time,
                v.node
            ),
            None => writeln!(out, "  v{x} [label=\"{}\\n{label}\"];", c.name(x)),
        };
    }
    for g in c.generators() {
        let _ = writeln!(out, "  v{} -> v{};", g.source, g.target);
    }
    out.push_str("}\n");
    out
}

fn diagram(title: impl Into<String>, m: &FunctorModule) -> Diagram {
    let title = title.into();
    Diagram {
        grid: render_grid(m),
        dot: module_dot(m, &title),
        title,
    }
}

fn simple_module(c: &Arc<PresentedCategory>, x: usize) -> Result<FunctorModule> {
    let dims: Vec<usize> = (0..c.len()).map(|y| usize::from(y == x)).collect();
    let maps = c
        .generators()
        .iter()
        .map(|g| Matrix::zeros(c.field(), dims[g.source], dims[g.target]))
        .collect();
    FunctorModule::new(c.clone(), dims, maps)
}

/// `rep:X`, `delta:X`, `nabla:X` or `simple:X`; a bare name means `rep`.
fn module_ref(built: &Built, r: &str) -> Result<(String, FunctorModule)> {
    let (kind, name) = r.split_once(':').unwrap_or(("rep", r));
    let c = &built.category;
    let x = built.object(name)?;
    let m = match kind {
        "rep" => FunctorModule::representable(c, x),
        "simple" => simple_module(c, x)?,
        "delta" | "nabla" => {
            let fam = standard_family(c, &built.filtration)?;
            let e = fam.entry(x).expect("every object lies in a layer");
            if kind == "delta" {
                e.delta.clone()
            } else {
                e.nabla.clone()
            }
        }
        k => {
            return Err(Error::Invalid(format!(
                "unknown module kind `{k}` (rep, delta, nabla or simple)"
            )))
        }
    };
    let label = match kind {
        "rep" => format!("C(-,{})", c.name(x)),
        "simple" => format!("S({})", c.name(x)),
        "delta" => format!("Delta({})", c.name(x)),
        _ => format!("Nabla({})", c.name(x)),
    };
    Ok((label, m))
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Tilting { rows, cols } => cmd_tilting(&cli.command, &cli.input, *rows, *cols),
        Command::Tensor { left, right } => cmd_tensor(&cli.command, &cli.input, left, right),
        command => {
            let spec = resolve_spec(&cli.input)?;
            let inputs = vec![serde_json::to_string(&spec).expect("spec serializes")];
            if let Command::Ideal { layer, target } = command {
                return cmd_ideal(command, &spec, &inputs, *layer, target);
            }
            let built = spec.build()?;
            let c = &built.category;
            let (certs, diagrams) = match command {
                Command::CheckQh => {
                    let qh = check_qh(c, &built.filtration)?;
                    let mut certs = vec![qh.clone()];
                    if qh.passed {
                        let fam = standard_family(c, &built.filtration)?;
                        certs.push(check_delta_lemmas(&fam)?);
                    }
                    (certs, Vec::new())
                }
                Command::Delta { layer } => cmd_delta(&built, *layer)?,
                Command::Trace { target } => {
                    let (label, m) = module_ref(&built, target)?;
                    let fam = standard_family(c, &built.filtration)?;
                    let tf = trace_filtration(&m, &built.filtration)?;
                    let mut diagrams = vec![diagram(label.clone(), &m)];
                    for j in 1..tf.steps.len() {
                        diagrams.push(diagram(format!("{label} trace step {j}"), tf.step(j)));
                    }
                    (vec![is_delta_filtered(&m, &fam)?], diagrams)
                }
                Command::Approx { target } => {
                    let (label, m) = module_ref(&built, target)?;
                    let fam = standard_family(c, &built.filtration)?;
                    let approx = right_approximation(&m, &fam, &[])?;
                    let diagrams = vec![
                        diagram(label.clone(), &m),
                        diagram(format!("approximation Z of {label}"), &approx.z),
                    ];
                    (vec![approx.certificate], diagrams)
                }
                _ => unreachable!("handled above"),
            };
            Ok(report(command, &inputs, certs, diagrams, built.dot.clone()))
        }
    }
}

fn cmd_delta(built: &Built, layer: usize) -> Result<(Vec<Certificate>, Vec<Diagram>)> {
    let c = &built.category;
    if layer == 0 || layer > built.filtration.layer_count() {
        return Err(Error::Invalid(format!(
            "layer {layer} is out of range 1..={}",
            built.filtration.layer_count()
        )));
    }
    let fam = standard_family(c, &built.filtration)?;
    let mut cert = Certificate::new(
        CertificateKind::QhChain,
        format!("standard modules of layer {layer}"),
    );
    let mut diagrams = Vec::new();
    for e in fam.layer(layer) {
        let name = c.name(e.object);
        cert.check(
            format!("dim End(Delta({name})) = 1"),
            hom_dim(&e.delta, &e.delta)? == 1,
            String::new(),
        );
        cert.check(
            format!("dim Hom(Delta({name}), Nabla({name})) = 1"),
            hom_dim(&e.delta, &e.nabla)? == 1,
            String::new(),
        );
        diagrams.push(diagram(format!("Delta({name})"), &e.delta));
        diagrams.push(diagram(format!("Nabla({name})"), &e.nabla));
    }
    Ok((vec![cert], diagrams))
}

fn names(c: &PresentedCategory, objs: &[usize]) -> String {
    let v: Vec<&str> = objs.iter().map(|&o| c.name(o)).collect();
    format!("[{}]", v.join(", "))
}

/// Seven nodes around the target and eight grid columns ending a column and a half past it.
fn default_window(x: Vertex) -> WindowSpec {
    WindowSpec {
        times: [x.time - 11, x.time + 3],
        nodes: [x.node - 3, x.node + 3],
    }
}

fn cmd_ideal(
    command: &Command,
    spec: &SpecFile,
    inputs: &[String],
    layer: usize,
    target: &str,
) -> Result<Report> {
    let field = spec.field()?;
    let (c, b_objects, x, shown, dot) = match &spec.family {
        Some(f) => {
            let (ambient, lf) = spec::labeled_filtration(f, f.layers.max(layer + 1))?;
            let xv = match crate::quiver::LabeledFiltration::parse_label(target)
                .and_then(|(i, j)| lf.vertex(i, j))
            {
                Some(v) => v,
                None => {
                    let (t, n) = target
                        .split_once(',')
                        .ok_or_else(|| Error::UnknownObject(target.to_string()))?;
                    Vertex::new(
                        t.trim()
                            .parse()
                            .map_err(|_| Error::UnknownObject(target.into()))?,
                        n.trim()
                            .parse()
                            .map_err(|_| Error::UnknownObject(target.into()))?,
                    )
                }
            };
            let window = f.window.unwrap_or_else(|| default_window(xv));
            let shown_vertices = window.vertices(&ambient);
            let b: Vec<Vertex> = lf.layers[..layer.min(lf.layers.len())]
                .iter()
                .flatten()
                .map(|(_, v)| *v)
                .collect();
            let mut objs: Vec<Vertex> = Vec::new();
            let mut seen = BTreeSet::new();
            for v in b.iter().chain(&shown_vertices).chain(std::iter::once(&xv)) {
                if seen.insert(*v) {
                    objs.push(*v);
                }
            }
            let c = Arc::new(truncation(&ambient, &objs, field)?);
            let find = |v: &Vertex| c.find_vertex(*v).expect("object of the truncation");
            let b_objects: BTreeSet<usize> = b.iter().map(find).collect();
            let shown: Vec<usize> = shown_vertices.iter().map(find).collect();
            let x = find(&xv);
            let set: BTreeSet<Vertex> = objs.iter().copied().collect();
            let dot = crate::quiver::TranslationQuiver::from_ambient(&ambient, &set).to_dot();
            (c, b_objects, x, Some(shown), dot)
        }
        None => {
            let built = spec.build()?;
            if layer > built.filtration.layer_count() {
                return Err(Error::Invalid(format!("layer {layer} is out of range")));
            }
            let x = built.object(target)?;
            let b = built.filtration.cumulative(layer);
            (built.category.clone(), b, x, None, built.dot.clone())
        }
    };
    let ideal = c.ideal_table(&b_objects);
    let (module, _) = ideal_module(&c, &ideal, x)?;
    let subject = format!("I_B{layer}(-,{})", c.name(x));
    let mut cert = Certificate::new(CertificateKind::Heredity, subject.clone());
    let mut modules = vec![(subject.clone(), module.clone())];
    if module.is_zero() {
        cert.witness("zero", "the functor vanishes", None);
    } else {
        let cover = projective_cover(&module)?;
        let (kernel, inc) = cover.map.kernel()?;
        cert.check(
            format!("cover by representables of B{layer}"),
            cover.summands.iter().all(|s| b_objects.contains(s)),
            names(&c, &cover.summands),
        );
        modules.push((
            format!("cover {}", names(&c, &cover.summands)),
            cover.module.clone(),
        ));
        if kernel.is_zero() {
            cert.witness(
                "presentation",
                format!("projective, {}", names(&c, &cover.summands)),
                Some(Evidence::Isomorphism(cover.map.clone())),
            );
        } else {
            let kcover = projective_cover(&kernel)?;
            let (kk, _) = kcover.map.kernel()?;
            cert.check(
                "kernel is projective",
                kk.is_zero(),
                format!("kernel of its cover has dimension {}", kk.total_dim()),
            );
            cert.witness(
                "presentation",
                format!(
                    "{} -> {}",
                    names(&c, &kcover.summands),
                    names(&c, &cover.summands)
                ),
                Some(Evidence::ShortExact {
                    injection: inc,
                    surjection: cover.map.clone(),
                }),
            );
            modules.push((format!("kernel {}", names(&c, &kcover.summands)), kernel));
        }
    }
    let diagrams = match &shown {
        Some(objs) => {
            let sub = Arc::new(c.full_subcategory(objs)?);
            modules
                .iter()
                .map(|(t, m)| Ok(diagram(t.clone(), &m.restrict(&sub, objs)?)))
                .collect::<Result<Vec<_>>>()?
        }
        None => modules.iter().map(|(t, m)| diagram(t.clone(), m)).collect(),
    };
    Ok(report(command, inputs, vec![cert], diagrams, dot))
}

fn cmd_tilting(command: &Command, input: &InputArgs, rows: usize, cols: usize) -> Result<Report> {
    if rows < 3 || cols < 2 {
        return Err(Error::Invalid(
            "the tilting sweep needs at least 3 rows and 2 columns".into(),
        ));
    }
    let field = Field::parse(input.field.as_deref().unwrap_or("q"))?;
    let start = -(cols as i64 / 2);
    let end = start + cols as i64 - 1;
    let w = ZaWindow::rectangle(rows, start..=end, field)?;
    let s = if end >= 1 { 1 } else { end };
    let mut certs = vec![verify_tilting(&w)?, verify_ses(&w, 3, s)?];
    let fam = row_family(&w)?;
    certs.push(verify_t_in_fdelta(&w, &fam, 1, s)?);
    let pieces = [build_t(&w, 1, s)?, build_t(&w, 3, s)?];
    let rep = FunctorModule::representable(
        w.category(),
        w.object(2, s).expect("row 2 is in the window"),
    );
    let mut diagrams = Vec::new();
    for (title, m) in [
        (format!("T(1,{s})"), &pieces[0].module),
        (format!("T(3,{s})"), &pieces[1].module),
        (format!("C(-,E2_{s})"), &rep),
    ] {
        diagrams.push(Diagram {
            grid: w.render(m),
            dot: module_dot(m, &title),
            title,
        });
    }
    let inputs = vec![format!("rows {rows} cols {cols} field {field}")];
    let dot = module_dot(&FunctorModule::zero(w.category().clone()), "window");
    Ok(report(command, &inputs, certs, diagrams, dot))
}

/// `a<N>` or a spec file path.
fn tensor_factor(src: &str, field: Field) -> Result<(Arc<PresentedCategory>, Filtration, String)> {
    if let Some(n) = src.strip_prefix('a').and_then(|n| n.parse::<usize>().ok()) {
        if n == 0 {
            return Err(Error::Invalid("A_0 has no objects".into()));
        }
        let c = Arc::new(QuiverWithRelations::linear(n).build(field, None, None)?);
        let f = Filtration::new(&c, (0..n).rev().map(|x| vec![x]).collect())?;
        return Ok((c, f, format!("linear {n}")));
    }
    let mut spec = read_spec(std::path::Path::new(src))?;
    spec.field = field.to_string();
    let text = serde_json::to_string(&spec).expect("spec serializes");
    let built = spec.build()?;
    Ok((built.category, built.filtration, text))
}

fn cmd_tensor(command: &Command, input: &InputArgs, left: &str, right: &str) -> Result<Report> {
    let field = Field::parse(input.field.as_deref().unwrap_or("q"))?;
    let (c1, f1, d1) = tensor_factor(left, field)?;
    let (c2, f2, d2) = tensor_factor(right, field)?;
    let v = verify_tensor_qh(&c1, &f1, &c2, &f2)?;
    let dot = module_dot(&FunctorModule::zero(v.tensor.category.clone()), "tensor");
    Ok(report(
        command,
        &[d1, d2],
        vec![v.certificate],
        Vec::new(),
        dot,
    ))
}
