use std::fmt::Write as _;

use logjac::criteria::{
    consmac_conditions, duality_symmetric, hodge_loci_proper, hodgefil_report, vanishing_report, CriterionReport,
};
use logjac::fermat::default_example;
use logjac::jacring::InstanceEcho;
use logjac::oracles::{calibrate, calibrate_pair, crosscheck_fields, curve_open_hodge, measure, regularity_certificate};
use logjac::{Field, FieldKind, RingInstance, SliceKey, ENGINE_VERSION};
use serde::Serialize;

use crate::cache::{Cache, CacheEntry};
use crate::instance::{Coefficients, InstanceSpec};
use crate::{dispatch, Cli, CliError, Command, CriteriaCommand, CriterionKind, FermatCommand, Global, OracleCommand, RingCommand};

/// Everything a command emits. No timestamps, so reruns are byte-identical.
#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    engine_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    echo: Option<InstanceEcho>,
    checks_pass: bool,
    result: T,
}

struct Output<T: Serialize> {
    report: Report<T>,
    table: String,
    failure: String,
}

impl<T: Serialize> Output<T> {
    fn new(command: &str, result: T, table: String) -> Self {
        Output {
            report: Report {
                command: command.into(),
                engine_version: ENGINE_VERSION,
                instance_hash: None,
                echo: None,
                checks_pass: true,
                result,
            },
            table,
            failure: String::new(),
        }
    }

    fn instance(mut self, hash: String, echo: InstanceEcho) -> Self {
        self.report.instance_hash = Some(hash);
        self.report.echo = Some(echo);
        self
    }

    fn check(mut self, pass: bool, failure: impl Into<String>) -> Self {
        if !pass {
            self.report.checks_pass = false;
            self.failure = failure.into();
        }
        self
    }

    fn emit(self, global: &Global) -> Result<(), CliError> {
        match &global.json {
            Some(path) => {
                let mut text = serde_json::to_string_pretty(&self.report).expect("report serializes");
                text.push('\n');
                std::fs::write(path, text)?;
            }
            None => {
                if let Some(echo) = &self.report.echo {
                    println!(
                        "# n={} d={} e={} field={} variant={} seed={}",
                        echo.n,
                        echo.d,
                        echo.e,
                        echo.field,
                        echo.variant,
                        echo.seed.map_or("-".into(), |s| s.to_string())
                    );
                }
                print!("{}", self.table);
            }
        }
        if self.report.checks_pass {
            Ok(())
        } else {
            Err(CliError::Check(self.failure))
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Ring(cmd) => ring(g, cmd),
        Command::Criteria(CriteriaCommand::Scan { criterion, n, d, e, p, l, p2, l2 }) => {
            scan(*criterion, [*n, *d, *e, *p, *l, *p2, *l2]).emit(g)
        }
        Command::Vanishing { n, m, k } => {
            if *n < 2 {
                return Err(CliError::Usage(format!("vanishing needs n >= 2, got {n}")));
            }
            let r = vanishing_report(*n, *m, *k);
            let rows = r
                .claims
                .iter()
                .map(|c| {
                    vec![
                        c.j.to_string(),
                        c.s_j.to_string(),
                        c.case.map_or("-".into(), |x| format!("{x:?}")),
                        c.q_range.map_or("-".into(), |(a, b)| format!("{a}..{b}")),
                        c.h2_vanishes.to_string(),
                    ]
                })
                .collect();
            let mut t = table(&["j", "s_j", "case", "H^q = 0 for q in", "H^2 = 0"], rows);
            let _ = writeln!(t, "assumption: {}", r.assumption);
            Output::new("vanishing", r, t).emit(g)
        }
        Command::Duality { m, k } => {
            let r = duality_symmetric(*m, *k);
            let mut t = format!("m={m} k={k} symmetric={}\n", r.symmetric);
            if let Some(flag) = &r.flag {
                let _ = writeln!(t, "flag: {flag}");
            }
            let rows = r.fano_table.iter().map(|x| vec![x.m.to_string(), x.k.to_string(), x.note.clone()]).collect();
            t.push_str(&table(&["m", "k", "Fano table"], rows));
            Output::new("duality", r, t).emit(g)
        }
        Command::Fermat(FermatCommand::Verify) => {
            let r = default_example()?;
            let t = r.table();
            let ok = r.certificate;
            Output::new("fermat verify", r, t).check(ok, "certificate is false").emit(g)
        }
        Command::Oracle(OracleCommand::Compare) => oracle_compare(g),
    }
}

fn resolve(g: &Global) -> Result<InstanceSpec, CliError> {
    let mut spec = match (&g.instance, g.nde) {
        (Some(path), None) => InstanceSpec::load(path)?,
        (None, Some((n, d, e))) => InstanceSpec::generic(n, d, e, g.seed.unwrap_or(1)),
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --instance or --nde, not both".into())),
        (None, None) => return Err(CliError::Usage("this command needs --instance <path> or --nde n,d,e".into())),
    };
    if let Some(field) = g.field {
        spec.field = field;
    }
    if let Some(v) = g.variant {
        spec.variant = v;
    }
    if let (Some(s), Coefficients::Generic { seed }) = (g.seed, &mut spec.coefficients) {
        *seed = s;
    }
    if g.degree_cap.is_some() {
        spec.degree_cap = g.degree_cap;
    }
    Ok(spec)
}

fn open_cache(g: &Global) -> Result<Option<Cache>, CliError> {
    g.cache_dir.as_ref().map(Cache::open).transpose().map_err(CliError::from)
}

fn ring(g: &Global, cmd: &RingCommand) -> Result<(), CliError> {
    let spec = resolve(g)?;
    let hash = spec.content_hash();
    let cache = open_cache(g)?;
    let any = spec.build()?;
    dispatch!(any, inst => {
        let echo = inst.echo();
        match cmd {
            RingCommand::Dims { l } => ring_dims(&inst, *l, cache.as_ref(), &hash)?.instance(hash, echo).emit(g),
            RingCommand::Pairing { q, l } => ring_pairing(&inst, *q, *l)?.instance(hash, echo).emit(g),
            RingCommand::Hodge { l } => ring_hodge(&inst, *l)?.instance(hash, echo).emit(g),
            RingCommand::Calibrate { seeds } => ring_calibrate(&inst, &spec, seeds)?.instance(hash, echo).emit(g),
        }
    })
}

#[derive(Clone, Debug, Serialize)]
struct DimRow {
    q: i64,
    l: i64,
    ambient: usize,
    ideal_rank: usize,
    dim: usize,
}

fn slice_row<F: Field>(inst: &RingInstance<F>, key: SliceKey, cache: Option<&Cache>, hash: &str) -> Result<DimRow, CliError> {
    let ambient = inst.slice_dimension(key);
    let row = |dim, ideal_rank| DimRow { q: key.q, l: key.l, ambient, ideal_rank, dim };
    if let Some(hit) = cache.and_then(|c| c.get(hash, key)) {
        return Ok(row(hit.dim, hit.rank));
    }
    let piece = inst.quotient_piece(key)?;
    if let Some(c) = cache {
        c.put(&CacheEntry::new(hash, key, piece.dim(), piece.rank()))?;
    }
    Ok(row(piece.dim(), piece.rank()))
}

/// Computes rows on worker threads; the instance memo and the cache are the
/// only shared state.
fn slice_rows<F: Field>(
    inst: &RingInstance<F>,
    keys: &[SliceKey],
    cache: Option<&Cache>,
    hash: &str,
) -> Result<Vec<DimRow>, CliError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(keys.len().max(1));
    let chunk = keys.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = keys
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&k| slice_row(inst, k, cache, hash)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn ring_dims<F: Field>(
    inst: &RingInstance<F>,
    l: Option<(i64, i64)>,
    cache: Option<&Cache>,
    hash: &str,
) -> Result<Output<Vec<DimRow>>, CliError> {
    let (lo, hi) = l.unwrap_or_else(|| inst.duality_window());
    let keys: Vec<SliceKey> =
        (lo..=hi).flat_map(|l| (0..inst.n() as i64).map(move |q| SliceKey::new(q, l))).collect();
    let rows = slice_rows(inst, &keys, cache, hash)?;
    let t = table(
        &["q", "l", "dim A_q(l)", "rank J", "dim B_q(l)"],
        rows.iter()
            .map(|r| vec![r.q.to_string(), r.l.to_string(), r.ambient.to_string(), r.ideal_rank.to_string(), r.dim.to_string()])
            .collect(),
    );
    Ok(Output::new("ring dims", rows, t))
}

fn ring_pairing<F: Field>(inst: &RingInstance<F>, q: Option<i64>, l: Option<i64>) -> Result<Output<Vec<logjac::PairingReport>>, CliError> {
    let keys: Vec<(i64, i64)> = match (q, l) {
        (Some(q), Some(l)) => vec![(q, l)],
        (None, None) => {
            let (lo, hi) = inst.duality_window();
            (lo..=hi).flat_map(|l| (0..inst.n() as i64).map(move |q| (q, l))).collect()
        }
        _ => return Err(CliError::Usage("give both --q and --l, or neither".into())),
    };
    let reports = keys.iter().map(|&(q, l)| inst.pairing_report(q, l)).collect::<Result<Vec<_>, _>>()?;
    let mut t = table(
        &["q", "l", "dim B_q(l)", "dual dim", "socle", "rank", "perfect"],
        reports
            .iter()
            .map(|r| {
                vec![
                    r.q.to_string(),
                    r.l.to_string(),
                    r.left_dim.to_string(),
                    r.right_dim.to_string(),
                    r.socle_dim.to_string(),
                    r.rank.to_string(),
                    r.perfect.to_string(),
                ]
            })
            .collect(),
    );
    let mut findings = Vec::new();
    for r in &reports {
        for f in &r.findings {
            let _ = writeln!(t, "({}, {}): {f}", r.q, r.l);
            findings.push(f.clone());
        }
    }
    let ok = reports.iter().all(|r| r.perfect);
    let failure = findings.first().cloned().unwrap_or_else(|| "pairing is not perfect".into());
    Ok(Output::new("ring pairing", reports, t).check(ok, failure))
}

#[derive(Serialize)]
struct HodgeResult {
    l: i64,
    twist: i64,
    dims: Vec<usize>,
    /// Curve oracle `(h^{1,0}, h^{0,1})` for plane curves at `l = 0`.
    oracle: Option<(i64, i64)>,
}

fn ring_hodge<F: Field>(inst: &RingInstance<F>, l: i64) -> Result<Output<HodgeResult>, CliError> {
    let dims = inst.hodge_numbers(l)?;
    let twist = inst.d() as i64 + inst.e() as i64 - inst.n() as i64 - 1 + l;
    let oracle = (inst.n() == 2 && l == 0).then(|| curve_open_hodge(inst.d(), inst.e()));
    let mut t = table(
        &["q", "l", "dim B_q(l)"],
        dims.iter().enumerate().map(|(q, d)| vec![q.to_string(), twist.to_string(), d.to_string()]).collect(),
    );
    let ok = oracle.map_or(true, |(a, b)| dims == [a as usize, b as usize]);
    if let Some((a, b)) = oracle {
        let _ = writeln!(t, "curve oracle: [{a}, {b}] ({})", if ok { "agrees" } else { "DISAGREES" });
    }
    let failure = format!("hodge numbers {dims:?} disagree with the curve oracle {oracle:?}");
    Ok(Output::new("ring hodge", HodgeResult { l, twist, dims, oracle }, t).check(ok, failure))
}

fn ring_calibrate<F: Field>(
    inst: &RingInstance<F>,
    spec: &InstanceSpec,
    seeds: &[u64],
) -> Result<Output<logjac::oracles::CalibrationReport>, CliError> {
    let report = match (&spec.coefficients, spec.field) {
        (Coefficients::Generic { seed }, FieldKind::Q) => {
            let seeds = if seeds.is_empty() { vec![*seed] } else { seeds.to_vec() };
            calibrate(inst.n(), inst.d(), inst.e(), &seeds)?
        }
        _ if !seeds.is_empty() => {
            return Err(CliError::Usage("--seeds applies only to generic instances over Q".into()));
        }
        _ => calibrate_pair(inst)?,
    };
    let names: Vec<&str> = report.passing.iter().map(|v| v.name()).collect();
    let t = format!("{}passing: {}\n", report.table(), names.join(", "));
    Ok(Output::new("ring calibrate", report, t))
}

#[derive(Serialize)]
struct OracleResult {
    regular: bool,
    measurement: logjac::oracles::VariantMeasurement,
    crosscheck: logjac::oracles::CrosscheckReport,
}

fn oracle_compare(g: &Global) -> Result<(), CliError> {
    let spec = resolve(g)?;
    let hash = spec.content_hash();
    let prime_seed = g.seed.unwrap_or(match spec.coefficients {
        Coefficients::Generic { seed } => seed,
        Coefficients::Explicit { .. } => 1,
    });
    let any = spec.build()?;
    dispatch!(any, inst => {
        let regular = regularity_certificate(&inst)?;
        let measurement = measure(&inst)?;
        let (lo, hi) = inst.duality_window();
        let top = inst.n() as i64 - 1;
        let mut keys: Vec<SliceKey> = (lo..=hi).flat_map(|l| (0..=top).map(move |q| SliceKey::new(q, l))).collect();
        let socle = SliceKey::new(top, inst.sigma());
        if !keys.contains(&socle) {
            keys.push(socle);
        }
        let crosscheck = crosscheck_fields(&inst, &keys, prime_seed)?;
        let mut t = String::new();
        let _ = writeln!(t, "regularity certificate: {regular}");
        let _ = writeln!(t, "B_0 = {} ({}), socle = {} ({})", measurement.b0, ok(measurement.b0_ok), measurement.socle, ok(measurement.socle_ok));
        let _ = writeln!(t, "duality symmetry: {}", ok(measurement.duality_ok));
        let _ = writeln!(t, "primes {:?}: {}", crosscheck.primes, if crosscheck.agree { "all dims agree" } else { "DISAGREE" });
        t.push_str(&table(
            &["q", "l", "dim"],
            crosscheck.keys.iter().zip(&crosscheck.dims).map(|(k, d)| vec![k.q.to_string(), k.l.to_string(), d.to_string()]).collect(),
        ));
        let pass = regular && measurement.passes() && crosscheck.agree;
        let result = OracleResult { regular, measurement, crosscheck };
        Output::new("oracle compare", result, t)
            .instance(hash, inst.echo())
            .check(pass, "oracle disagreement")
            .emit(g)
    })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn scan(kind: CriterionKind, ranges: [(i64, i64); 7]) -> Output<Vec<CriterionReport>> {
    let span = |(a, b): (i64, i64)| a..=b;
    let [n, d, e, p, l, p2, l2] = ranges;
    let mut reports = Vec::new();
    for n in span(n) {
        for d in span(d) {
            for e in span(e) {
                for p in span(p) {
                    match kind {
                        CriterionKind::Loci => reports.push(hodge_loci_proper(n, d, e, p)),
                        CriterionKind::Hodgefil => reports.extend(span(l).map(|l| hodgefil_report(n, d, e, p, l))),
                        CriterionKind::Consmac => {
                            for l in span(l) {
                                for p2 in span(p2) {
                                    for l2 in span(l2) {
                                        reports.push(consmac_conditions(n, d, e, p, p2, l, l2));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut headers: Vec<String> = reports
        .first()
        .map(|r| r.inputs.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    headers.push("verdict".into());
    headers.push("failing".into());
    let rows = reports
        .iter()
        .map(|r| {
            let mut row: Vec<String> = r.inputs.iter().map(|(_, v)| v.to_string()).collect();
            row.push(r.verdict.to_string());
            let failing: Vec<&str> = r.conditions.iter().filter(|c| !c.holds).map(|c| c.text.as_str()).collect();
            row.push(if failing.is_empty() { "-".into() } else { failing.join("; ") });
            row
        })
        .collect();
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    let t = table(&headers, rows);
    Output::new("criteria scan", reports, t)
}

/// Width-aligned plain-text table.
fn table(headers: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(headers.to_vec());
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
