use std::fmt::Write as _;
use std::path::Path;

use debranges::frames::{self, FrameReport, FrameSystem};
use debranges::kernel::{self as kern, kernel_diag};
use debranges::linalg::hermitian_eigenvalues;
use debranges::multiplex::{self, ChannelReport, MultiplexedStream};
use debranges::nodes::{solve_nodes, NodeSet};
use debranges::presets::{self, Preset};
use debranges::space::{self, QuadratureSpec};
use debranges::verify::{random_combination, real_grid, run_checks};
use debranges::{Complex64, HermiteBiehlerFunction, KernelCombination};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::io::{self, CombinationSpec, NodeRow, SampleRow, StreamRow};
use crate::{BoundsArgs, Functions, KernelArgs, MultiplexArgs, NodesArgs, ReconstructArgs, SampleArgs, VerifyArgs, Window};

const DEFAULT_PROBES: [f64; 6] = [0.0, 0.3, 0.7, 1.4, -0.9, -2.1];

struct Generators {
    e: HermiteBiehlerFunction,
    f: Option<HermiteBiehlerFunction>,
}

impl Generators {
    /// `E`, or `E·F` when a second function is given. Nodes are solved on this.
    fn working(&self) -> HermiteBiehlerFunction {
        match &self.f {
            Some(f) => self.e.product(f),
            None => self.e.clone(),
        }
    }
}

fn load(functions: &Functions) -> CliResult<Generators> {
    let preset = match &functions.preset {
        Some(name) => Some(presets::by_name(name).map_err(|e| CliError::Input(format!("--preset: {e}")))?),
        None => None,
    };
    let e = match (&functions.hb, &preset) {
        (Some(path), _) => io::read_hb(path, "--hb")?,
        (None, Some(p)) => p.e.clone(),
        (None, None) => return Err(CliError::Input("--hb: a generator file or --preset is required".into())),
    };
    let f = match (&functions.hb2, &preset) {
        (Some(path), _) => Some(io::read_hb(path, "--hb2")?),
        (None, Some(p)) => Some(p.f.clone()),
        (None, None) => None,
    };
    Ok(Generators { e, f })
}

fn parse_grid(text: &str) -> CliResult<Vec<Complex64>> {
    let bad = |msg: &str| CliError::Input(format!("--grid \"{text}\": {msg}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected a:b:step"));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| bad(&format!("'{part}' is not a number")))?;
        if !slot.is_finite() {
            return Err(bad("values must be finite"));
        }
    }
    let [a, b, step] = v;
    if step <= 0.0 {
        return Err(bad("step must be > 0"));
    }
    if a > b {
        return Err(bad("a must be <= b"));
    }
    if (b - a) / step > 1e7 {
        return Err(bad("too many grid points"));
    }
    Ok(real_grid(a, b, step))
}

fn parse_point(text: &str, field: &str) -> CliResult<Complex64> {
    let bad = || CliError::Input(format!("{field} \"{text}\": expected re,im"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn solve(g: &HermiteBiehlerFunction, window: &Window) -> CliResult<NodeSet> {
    if window.n_lo > window.n_hi {
        return Err(CliError::Input(format!(
            "--n-lo {} must not exceed --n-hi {}",
            window.n_lo, window.n_hi
        )));
    }
    if !(window.tol_residual > 0.0) {
        return Err(CliError::Input("--tol-residual must be > 0".into()));
    }
    let set = solve_nodes(g, window.alpha, window.n_lo, window.n_hi).map_err(|e| CliError::from_lib("node solver", e))?;
    if let Some((n, r)) = set.indexed().map(|(n, _)| n).zip(set.residuals()).find(|(_, r)| **r > window.tol_residual) {
        return Err(CliError::Numerical(format!(
            "node solver: residual {r:e} at n = {n} exceeds --tol-residual {:e}",
            window.tol_residual
        )));
    }
    Ok(set)
}

fn signal(path: Option<&Path>, e: &HermiteBiehlerFunction, rng: &mut ChaCha8Rng) -> CliResult<KernelCombination> {
    match path {
        Some(p) => io::read_combination(p, e),
        None => Ok(random_combination(rng, e, 3, 2.0, 0.5)),
    }
}

pub fn nodes(args: NodesArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let set = solve(&gens.working(), &args.window)?;
    let rows: Vec<NodeRow> = set
        .indexed()
        .zip(set.residuals())
        .map(|((n, lambda), &residual)| NodeRow { n, lambda, residual })
        .collect();
    io::emit(args.out.as_ref(), "--out", &io::csv_string(&rows)?)
}

pub fn kernel(args: KernelArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let e = &gens.e;
    let center = parse_point(&args.center, "--center")?;
    let grid = parse_grid(&args.grid)?;
    if !(args.tol_quad_rel > 0.0) {
        return Err(CliError::Input("--tol-quad-rel must be > 0".into()));
    }
    if !(args.quad_half_width > 0.0 && args.quad_half_width.is_finite()) {
        return Err(CliError::Input("--quad-half-width must be finite and > 0".into()));
    }
    let mut text = String::from("x,re,im\n");
    for z in &grid {
        let v = kern::kernel(e, center, *z);
        writeln!(text, "{},{},{}", z.re, v.re, v.im).expect("string write");
    }
    let spec = QuadratureSpec {
        half_width: args.quad_half_width,
        rel_tol: args.tol_quad_rel,
        max_depth: args.quad_max_depth,
    };
    let k = KernelCombination::single(e.clone(), center);
    let q = space::inner_product(&k, &k, e, &spec);
    let exact = kern::kernel(e, center, center).re;
    eprintln!(
        "norm check: quadrature {:.12e} (estimate {:.2e}, tail {:.2e}, panels {}), K(w,w) {:.12e}",
        q.value.re, q.error_estimate, q.tail_bound, q.panels, exact
    );
    io::emit(args.out.as_ref(), "--out", &text)?;
    if !q.converged {
        return Err(CliError::Numerical(format!(
            "quadrature did not reach --tol-quad-rel {:e} within depth {} (interior estimate {:.2e})",
            args.tol_quad_rel, args.quad_max_depth, q.interior_error
        )));
    }
    Ok(())
}

pub fn sample(args: SampleArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let set = solve(&gens.working(), &args.window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let f = signal(args.r#ref.as_deref(), &gens.e, &mut rng)?;
    let values = f.sample(set.nodes());
    let rows: Vec<SampleRow> = set
        .indexed()
        .zip(&values)
        .map(|((n, lambda), v)| SampleRow { n, lambda, re: v.re, im: v.im })
        .collect();
    if let Some(path) = &args.ref_out {
        io::emit(Some(path), "--ref-out", &io::json_string(&CombinationSpec::from_combination(&f)))?;
    }
    io::emit(args.out.as_ref(), "--out", &io::csv_string(&rows)?)
}

pub fn reconstruct(args: ReconstructArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let rows = io::read_samples(&args.samples)?;
    let grid = parse_grid(&args.grid)?;
    let reference = match &args.r#ref {
        Some(p) => Some(io::read_combination(p, &gens.e)?),
        None => None,
    };
    let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let samples: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    let system = gens
        .f
        .as_ref()
        .map(|f| FrameSystem::from_points(&gens.e, f, rows[0].n, lambdas.clone()));
    let mut text = String::from(if reference.is_some() { "x,re,im,err\n" } else { "x,re,im\n" });
    for &z in &grid {
        let v = match &system {
            Some(sys) => sys.reconstruct_in_e(&samples, z),
            None => frames::reconstruct_onb(&gens.e, &lambdas, &samples, z),
        }
        .map_err(|e| CliError::from_lib("reconstruct", e))?;
        match &reference {
            Some(f) => writeln!(text, "{},{},{},{}", z.re, v.re, v.im, (v - f.eval(z)).norm()),
            None => writeln!(text, "{},{},{}", z.re, v.re, v.im),
        }
        .expect("string write");
    }
    io::emit(args.out.as_ref(), "--out", &text)
}

/// Smallest eigenvalue of the kernel Gram on the nodes, normalized to a unit diagonal.
fn min_normalized_gram_eig(e: &HermiteBiehlerFunction, nodes: &[f64]) -> CliResult<f64> {
    let points: Vec<Complex64> = nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut g = kern::gram(e, &points).map_err(|err| CliError::from_lib("gram", err))?;
    let scale: Vec<f64> = nodes.iter().map(|&x| kernel_diag(e, x).sqrt().recip()).collect();
    for j in 0..nodes.len() {
        for k in 0..nodes.len() {
            g[(j, k)] *= scale[j] * scale[k];
        }
    }
    Ok(hermitian_eigenvalues(&g).first().copied().unwrap_or(0.0))
}

pub fn bounds(args: BoundsArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let set = solve(&gens.working(), &args.window)?;
    let probes = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => DEFAULT_PROBES.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    };
    let b = frames::frame_bounds(&gens.e, set.nodes(), args.normalize, &probes)
        .map_err(|e| CliError::from_lib("frame bounds", e))?;
    let min_gram_eig = match &gens.f {
        Some(f) => FrameSystem::from_node_set(&gens.e, f, &set).naimark_spectrum().0,
        None => min_normalized_gram_eig(&gens.e, set.nodes())?,
    };
    let report = FrameReport {
        a_est: b.lower,
        b_est: b.upper,
        window: [set.index_lo(), set.index_hi()],
        normalize: args.normalize,
        min_gram_eig,
    };
    io::emit(args.out.as_ref(), "--out", &io::json_string(&report))
}

pub fn multiplex(args: MultiplexArgs) -> CliResult<()> {
    let gens = load(&args.functions)?;
    let f_gen = gens.f.clone().unwrap_or_else(|| gens.e.clone());
    let grid = parse_grid(&args.grid)?;
    let set = solve(&gens.e.product(&f_gen), &args.window)?;
    let sys = FrameSystem::from_node_set(&gens.e, &f_gen, &set);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let f = signal(args.r#ref.as_deref(), &gens.e, &mut rng)?;
    let g = signal(args.ref2.as_deref(), &f_gen, &mut rng)?;
    let sent = multiplex::encode(&sys, &f.sample(sys.nodes()), &g.sample(sys.nodes()))
        .map_err(|e| CliError::from_lib("encode", e))?;
    let received: MultiplexedStream<'_> = multiplex::simulate_channel(&sent, args.sigma, args.drop, args.seed)
        .map_err(|e| CliError::Input(format!("--sigma/--drop: {e}")))?;
    let (mut err_f, mut err_g) = (0.0f64, 0.0f64);
    for &z in &grid {
        err_f = err_f.max((multiplex::decode_f(&received, z) - f.eval(z)).norm());
        err_g = err_g.max((multiplex::decode_g(&received, z) - g.eval(z)).norm());
    }
    if let Some(path) = &args.stream_out {
        let rows: Vec<StreamRow> = set
            .indexed()
            .zip(received.values())
            .map(|((n, lambda), m)| StreamRow { n, lambda, m_re: m.re, m_im: m.im })
            .collect();
        io::emit(Some(path), "--stream-out", &io::csv_string(&rows)?)?;
    }
    let report = ChannelReport {
        sigma: args.sigma,
        drop: args.drop,
        window: [set.index_lo(), set.index_hi()],
        err_f,
        err_g,
    };
    io::emit(args.out.as_ref(), "--out", &io::json_string(&report))
}

pub fn verify(args: VerifyArgs) -> CliResult<()> {
    let preset = if args.functions.hb.is_none() && args.functions.preset.is_none() {
        presets::paley_wiener()
    } else {
        let gens = load(&args.functions)?;
        let overridden = args.functions.hb.is_some() || args.functions.hb2.is_some();
        let name = match (&args.functions.preset, overridden) {
            (Some(n), false) => presets::by_name(n).map_or("custom", |p| p.name),
            _ => "custom",
        };
        Preset {
            name,
            f: gens.f.unwrap_or_else(|| gens.e.clone()),
            e: gens.e,
        }
    };
    let checks = run_checks(&preset, args.seed).map_err(|e| CliError::from_lib("verify", e))?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut text = format!("preset {} seed {}\n", preset.name, args.seed);
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(text, "{status}  {:width$}  {}", c.name, c.detail).expect("string write");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(text, "{} passed, {failed} failed", checks.len() - failed).expect("string write");
    io::emit(args.out.as_ref(), "--out", &text)?;
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} check(s) failed")));
    }
    Ok(())
}
