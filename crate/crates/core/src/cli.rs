//! Command-line surface binding the library: evaluation, synthesis,
//! coverage, decomposition, graph, density, and a self-verification suite.
//!
//! Exit codes are a stable contract: 0 success, 1 property violation
//! (some claimed invariant failed to verify), 2 usage error (rejected
//! before any work starts). Machine emissions (json, dot, csv) go to
//! stdout or --out byte-identically across runs; progress summaries go
//! to stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::algebra::{digits_lsd, is_prime, mul_mod, Residue};
use crate::automaton::{synthesize, Dfao};
use crate::constant_graph::{build_graph, closed_walk_all_vertices, replay_walk};
use crate::coverage::{
    coverage_bfs, coverage_scan, gls_bound_report, infinitude_report, zero_density, CoverageTable,
    Fraction,
};
use crate::decomposition::{
    central_binomial_mod, decompose_residue, flatten, generators_span_units, verify_decomposition,
};
use crate::oracle::catalan_mod;

#[derive(Parser)]
#[command(
    name = "catmodp",
    version,
    about = "Catalan numbers modulo a prime: automaton synthesis and machine verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EmitFormat {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EvalMethod {
    Automaton,
    Oracle,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C_n mod p
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        /// Automaton walk, direct oracle, or both with a cross-check
        #[arg(long, value_enum, default_value_t = EvalMethod::Automaton)]
        method: EvalMethod,
    },
    /// Synthesize the automaton for p and emit it
    Synth {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = EmitFormat::Json)]
        emit: EmitFormat,
        /// Minimize before emitting (the synthesized automaton is
        /// already minimal; this proves it)
        #[arg(long)]
        minimize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal witness table: least n with C_n = r mod p for every r
    Coverage {
        #[arg(long)]
        p: u64,
        /// Scan limit (exclusive); default scans to p^4, extending to
        /// p^6 if residues are still missing
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, value_enum, default_value_t = EmitFormat::Text)]
        emit: EmitFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write r as a product of central binomial coefficients mod p
    Decompose {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum, default_value_t = EmitFormat::Text)]
        emit: EmitFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The multiplication graph on non-zero residues; --walk emits a
    /// closed walk through every vertex
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        walk: bool,
        #[arg(long, value_enum, default_value_t = EmitFormat::Text)]
        emit: EmitFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact fraction of n < p^k with C_n divisible by p, k = 1..=kmax
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = EmitFormat::Text)]
        emit: EmitFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every verification suite and print a pass/fail matrix
    Selftest {
        /// Comma-separated primes to verify
        #[arg(long = "p-list", value_delimiter = ',', default_values_t = vec![5u64, 7, 11, 13])]
        p_list: Vec<u64>,
        /// Sequential n range for the oracle-equivalence suite
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        /// Seed for the randomized n sample
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

enum Failure {
    /// Invalid request, rejected before any work. Exit code 2.
    Usage(String),
    /// A verified property failed to hold. Exit code 1.
    Property(String),
}

type CmdResult = std::result::Result<(), Failure>;

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Property(e.to_string())
    }
}

pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Eval { p, n, method } => cmd_eval(p, n, method),
        Command::Synth {
            p,
            emit,
            minimize,
            out,
        } => cmd_synth(p, emit, minimize, out),
        Command::Coverage {
            p,
            bound,
            emit,
            out,
        } => cmd_coverage(p, bound, emit, out),
        Command::Decompose { p, r, emit, out } => cmd_decompose(p, r, emit, out),
        Command::Graph { p, walk, emit, out } => cmd_graph(p, walk, emit, out),
        Command::Density { p, kmax, emit, out } => cmd_density(p, kmax, emit, out),
        Command::Selftest {
            p_list,
            bound,
            seed,
        } => cmd_selftest(p_list, bound, seed),
    }
}

fn require_prime(p: u64) -> CmdResult {
    if p < 5 || !is_prime(p) {
        return Err(Failure::Usage(format!("p must be a prime >= 5, got {p}")));
    }
    Ok(())
}

fn write_payload(out: &Option<PathBuf>, payload: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Failure::Property(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_eval(p: u64, n: u64, method: EvalMethod) -> CmdResult {
    require_prime(p)?;
    if n.checked_mul(2).is_none() {
        return Err(Failure::Usage(format!("n must be below 2^63, got {n}")));
    }
    match method {
        EvalMethod::Oracle => println!("{}", catalan_mod(n, p)),
        EvalMethod::Automaton => {
            let a = synthesize(p)?;
            println!("{}", a.eval(n));
        }
        EvalMethod::Both => {
            let a = synthesize(p)?;
            let via_automaton = a.eval(n);
            let via_oracle = catalan_mod(n, p);
            println!("automaton: {via_automaton}");
            println!("oracle: {via_oracle}");
            if via_automaton != via_oracle {
                return Err(Failure::Property(format!(
                    "eval mismatch at n={n}: automaton {via_automaton}, oracle {via_oracle}"
                )));
            }
        }
    }
    Ok(())
}

fn cmd_synth(p: u64, emit: EmitFormat, minimize: bool, out: Option<PathBuf>) -> CmdResult {
    require_prime(p)?;
    let payload = match emit {
        EmitFormat::Json | EmitFormat::Dot => {
            let mut a = synthesize(p)?;
            if minimize {
                a = a.minimize();
            }
            let family = a.detect_constant_family()?;
            eprintln!(
                "p={p} states={} constant_family={}",
                a.state_count(),
                family.constant_class().len()
            );
            if emit == EmitFormat::Json {
                a.to_json()
            } else {
                a.to_dot()
            }
        }
        _ => return Err(Failure::Usage("synth emits json or dot".into())),
    };
    write_payload(&out, &payload)
}

#[derive(Serialize)]
struct CoverageRowJson {
    residue: u64,
    witness: u64,
    digits: Vec<u32>,
}

#[derive(Serialize)]
struct GlsJson {
    max_witness: u64,
    bound: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct CoverageJson {
    p: u64,
    scanned_to: u64,
    complete: bool,
    missing: Vec<u64>,
    rows: Vec<CoverageRowJson>,
    gls: Option<GlsJson>,
}

fn coverage_payload(p: u64, table: &CoverageTable, emit: EmitFormat) -> Result<String, Failure> {
    let gls = table.is_complete().then(|| gls_bound_report(p, table));
    let digit_string = |digits: &[u32]| {
        digits
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join("-")
    };
    Ok(match emit {
        EmitFormat::Json => to_pretty_json(&CoverageJson {
            p,
            scanned_to: table.scanned_to,
            complete: table.is_complete(),
            missing: table.missing(),
            rows: table
                .witnesses()
                .map(|(r, w)| CoverageRowJson {
                    residue: r,
                    witness: w.n,
                    digits: w.digits.clone(),
                })
                .collect(),
            gls: gls.map(|g| GlsJson {
                max_witness: g.max_witness,
                bound: g.bound,
                ratio: g.ratio,
            }),
        }),
        EmitFormat::Csv => {
            let mut s = String::from("residue,witness,digits\n");
            for (r, w) in table.witnesses() {
                let _ = writeln!(s, "{r},{},{}", w.n, digit_string(&w.digits));
            }
            s
        }
        EmitFormat::Text => {
            let mut s = format!(
                "coverage table for p={p} (indices below {} scanned)\n",
                table.scanned_to
            );
            let _ = writeln!(s, "{:<8} {:<10} digits(lsd)", "residue", "witness");
            for (r, w) in table.witnesses() {
                let _ = writeln!(s, "{r:<8} {:<10} {}", w.n, digit_string(&w.digits));
            }
            if let Some(g) = gls {
                let _ = writeln!(s, "complete: yes");
                let _ = writeln!(s, "max witness: {}", g.max_witness);
                let _ = writeln!(
                    s,
                    "coverage bound margin: {} / {:.3e} = {:.3e}",
                    g.max_witness, g.bound, g.ratio
                );
            } else {
                let missing = table
                    .missing()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(s, "complete: no (missing residues {missing})");
            }
            s
        }
        EmitFormat::Dot => return Err(Failure::Usage("coverage emits json, csv, or text".into())),
    })
}

fn cmd_coverage(p: u64, bound: Option<u64>, emit: EmitFormat, out: Option<PathBuf>) -> CmdResult {
    require_prime(p)?;
    let table = coverage_scan(p, bound);
    for (r, w) in table.witnesses() {
        if catalan_mod(w.n, p) != r || digits_lsd(w.n, p) != w.digits {
            return Err(Failure::Property(format!(
                "witness {} does not reproduce residue {r} mod {p}",
                w.n
            )));
        }
    }
    let payload = coverage_payload(p, &table, emit)?;
    write_payload(&out, &payload)?;
    if !table.is_complete() {
        return Err(Failure::Property(format!(
            "residues {:?} not attained below {}",
            table.missing(),
            table.scanned_to
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExponentJson {
    d: u32,
    exponent: u64,
}

#[derive(Serialize)]
struct DecompositionJson {
    p: u64,
    r: u64,
    exponents: Vec<ExponentJson>,
    d_list: Vec<u32>,
    value: u64,
    verified: bool,
}

fn cmd_decompose(p: u64, r: u64, emit: EmitFormat, out: Option<PathBuf>) -> CmdResult {
    require_prime(p)?;
    if r == 0 || r >= p {
        return Err(Failure::Usage(format!(
            "r must lie in 1..{p} (residue 0 is not a product of units)"
        )));
    }
    let e = decompose_residue(r, p)?;
    if !verify_decomposition(&e, r, p) {
        return Err(Failure::Property(format!(
            "decomposition of {r} mod {p} does not multiply back"
        )));
    }
    let d_list = flatten(&e);
    let payload = match emit {
        EmitFormat::Json => to_pretty_json(&DecompositionJson {
            p,
            r,
            exponents: e
                .exponents()
                .map(|(d, exp)| ExponentJson { d, exponent: exp })
                .collect(),
            d_list: d_list.clone(),
            value: r,
            verified: true,
        }),
        EmitFormat::Csv => {
            let mut s = String::from("d,exponent\n");
            for (d, exp) in e.exponents() {
                let _ = writeln!(s, "{d},{exp}");
            }
            s
        }
        EmitFormat::Text => {
            let product = if e.is_empty() {
                "empty product".to_string()
            } else {
                e.exponents()
                    .map(|(d, exp)| format!("binom({},{d})^{exp}", 2 * d))
                    .collect::<Vec<_>>()
                    .join(" * ")
            };
            let mut s = format!("{r} = {product} (mod {p})\n");
            let _ = writeln!(s, "d-list: {d_list:?}");
            let _ = writeln!(s, "verified");
            s
        }
        EmitFormat::Dot => return Err(Failure::Usage("decompose emits json, csv, or text".into())),
    };
    write_payload(&out, &payload)
}

#[derive(Serialize)]
struct GraphJson {
    p: u64,
    vertex_count: u64,
    out_degree: usize,
    multipliers: Vec<u64>,
    strongly_connected: bool,
}

fn cmd_graph(p: u64, walk: bool, emit: EmitFormat, out: Option<PathBuf>) -> CmdResult {
    require_prime(p)?;
    let g = build_graph(p)?;
    let connected = g.strongly_connected();
    let payload = if walk {
        let w = closed_walk_all_vertices(&g)?;
        match emit {
            EmitFormat::Json => to_pretty_json(&w),
            EmitFormat::Csv => {
                let mut s = String::from("step,from,label,to\n");
                for (i, &d) in w.labels.iter().enumerate() {
                    let _ = writeln!(s, "{i},{},{d},{}", w.vertices[i], w.vertices[i + 1]);
                }
                s
            }
            EmitFormat::Text => {
                let path = w
                    .vertices
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" -> ");
                let mut s = format!("closed walk for p={p}, all {} vertices\n", g.vertex_count());
                let _ = writeln!(s, "length: {}", w.labels.len());
                let _ = writeln!(s, "vertices: {path}");
                let _ = writeln!(s, "labels: {:?}", w.labels);
                s
            }
            EmitFormat::Dot => {
                return Err(Failure::Usage(
                    "graph --walk emits json, csv, or text".into(),
                ))
            }
        }
    } else {
        match emit {
            EmitFormat::Json => to_pretty_json(&GraphJson {
                p,
                vertex_count: g.vertex_count(),
                out_degree: g.out_degree(),
                multipliers: g.multipliers().to_vec(),
                strongly_connected: connected,
            }),
            EmitFormat::Dot => g.to_dot(),
            EmitFormat::Csv => {
                let mut s = String::from("from,label,to\n");
                for c in 1..p {
                    for d in 0..g.out_degree() as u32 {
                        let _ = writeln!(s, "{c},{d},{}", g.step(c, d));
                    }
                }
                s
            }
            EmitFormat::Text => {
                let mut s = format!("multiplication graph for p={p}\n");
                let _ = writeln!(s, "vertices: {}", g.vertex_count());
                let _ = writeln!(s, "out-degree: {}", g.out_degree());
                let _ = writeln!(s, "multipliers: {:?}", g.multipliers());
                let _ = writeln!(
                    s,
                    "strongly connected: {}",
                    if connected { "yes" } else { "no" }
                );
                s
            }
        }
    };
    write_payload(&out, &payload)?;
    if !connected {
        return Err(Failure::Property(format!(
            "multiplication graph for p={p} is not strongly connected"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct DensityRowJson {
    k: u32,
    numerator: u64,
    denominator: u64,
}

#[derive(Serialize)]
struct DensityJson {
    p: u64,
    kmax: u32,
    fractions: Vec<DensityRowJson>,
}

fn cmd_density(p: u64, kmax: u32, emit: EmitFormat, out: Option<PathBuf>) -> CmdResult {
    require_prime(p)?;
    if kmax == 0 || p.checked_pow(kmax).is_none() {
        return Err(Failure::Usage(format!(
            "kmax must satisfy 1 <= kmax and p^kmax < 2^64, got {kmax}"
        )));
    }
    let a = synthesize(p)?;
    let fractions = zero_density(&a, kmax);
    // p^kmax fits u64, so every reduced numerator and denominator does too
    let narrow = |x: u128| u64::try_from(x).expect("bounded by p^kmax");
    let payload = match emit {
        EmitFormat::Json => to_pretty_json(&DensityJson {
            p,
            kmax,
            fractions: fractions
                .iter()
                .enumerate()
                .map(|(i, f)| DensityRowJson {
                    k: i as u32 + 1,
                    numerator: narrow(f.num),
                    denominator: narrow(f.den),
                })
                .collect(),
        }),
        EmitFormat::Csv => {
            let mut s = String::from("k,numerator,denominator\n");
            for (i, f) in fractions.iter().enumerate() {
                let _ = writeln!(s, "{},{},{}", i + 1, f.num, f.den);
            }
            s
        }
        EmitFormat::Text => {
            let mut s = format!("fraction of n < p^k with C_n = 0 mod {p}\n");
            for (i, f) in fractions.iter().enumerate() {
                let _ = writeln!(s, "k={}: {f}", i + 1);
            }
            s
        }
        EmitFormat::Dot => return Err(Failure::Usage("density emits json, csv, or text".into())),
    };
    write_payload(&out, &payload)?;
    for pair in fractions.windows(2) {
        if !pair[0].less_than(&pair[1]) {
            return Err(Failure::Property(format!(
                "zero density failed to increase: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

type SuiteResult = std::result::Result<String, String>;

fn suite_oracle_equivalence(a: &Dfao, n_bound: u64, seed: u64) -> SuiteResult {
    let p = a.p();
    for n in 0..n_bound {
        let got = a.eval(n);
        let want = catalan_mod(n, p);
        if got != want {
            return Err(format!("n={n}: automaton {got}, oracle {want}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p));
    const RANDOM_SAMPLES: usize = 2000;
    for _ in 0..RANDOM_SAMPLES {
        let n = rng.next_u64() >> 2;
        let got = a.eval(n);
        let want = catalan_mod(n, p);
        if got != want {
            return Err(format!("random n={n}: automaton {got}, oracle {want}"));
        }
    }
    Ok(format!(
        "{n_bound} sequential + {RANDOM_SAMPLES} random n agree"
    ))
}

fn suite_coverage(a: &Dfao) -> SuiteResult {
    let p = a.p();
    let scan = coverage_scan(p, None);
    if !scan.is_complete() {
        return Err(format!("missing residues {:?}", scan.missing()));
    }
    let bfs = coverage_bfs(a);
    if !bfs.is_complete() {
        return Err(format!("digit search missing residues {:?}", bfs.missing()));
    }
    for r in 0..p {
        let (s, b) = (scan.witness(r).unwrap(), bfs.witness(r).unwrap());
        if s.n != b.n {
            return Err(format!(
                "r={r}: scan witness {} vs digit search {}",
                s.n, b.n
            ));
        }
    }
    let entries = infinitude_report(a).map_err(|e| e.to_string())?;
    for entry in &entries {
        if entry.count_below_p6 == 0 {
            return Err(format!("residue {} never occurs below p^6", entry.residue));
        }
    }
    Ok(format!(
        "all residues attained, max witness {}, pumping certificates verified",
        scan.max_witness().unwrap_or(0)
    ))
}

fn suite_decomposition(p: u64) -> SuiteResult {
    let half = ((p - 1) / 2) as u32;
    for r in 1..p {
        let e = decompose_residue(r, p).map_err(|e| format!("r={r}: {e}"))?;
        if !verify_decomposition(&e, r, p) {
            return Err(format!("r={r}: product does not equal r"));
        }
        for (d, exp) in e.exponents() {
            if d == 0 || d > half || exp == 0 || exp >= p - 1 {
                return Err(format!(
                    "r={r}: factor binom({},{d})^{exp} out of range",
                    2 * d
                ));
            }
        }
    }
    if !generators_span_units(p) {
        return Err("central binomials do not generate the units".into());
    }
    Ok(format!("all {} residues verified", p - 1))
}

fn suite_family(a: &Dfao) -> SuiteResult {
    let p = a.p();
    let table = a.detect_constant_family().map_err(|e| e.to_string())?;
    let members = table.constant_class();
    if members.len() as u64 != p - 1 {
        return Err(format!("{} members, expected {}", members.len(), p - 1));
    }
    let mut labels: Vec<Residue> = members.iter().map(|m| m.label).collect();
    labels.sort_unstable();
    if labels != (1..p).collect::<Vec<_>>() {
        return Err(format!("labels {labels:?} are not 1..{p}"));
    }
    for &m in members {
        if a.output_of(m.state) != m.label {
            return Err(format!(
                "member labeled {} outputs {}",
                m.label,
                a.output_of(m.state)
            ));
        }
        for d in 0..=((p - 1) / 2) as u32 {
            let next = a
                .family_step(&table, m, d)
                .map_err(|e| format!("label {} digit {d}: {e}", m.label))?;
            let want = mul_mod(m.label, central_binomial_mod(d, p).unwrap(), p);
            if next.label != want {
                return Err(format!(
                    "label {} digit {d}: got {}, want {want}",
                    m.label, next.label
                ));
            }
        }
    }
    Ok(format!(
        "{} members, all digit actions verified",
        members.len()
    ))
}

fn suite_graph_walk(a: &Dfao) -> SuiteResult {
    let p = a.p();
    let g = build_graph(p).map_err(|e| e.to_string())?;
    if !g.strongly_connected() {
        return Err("graph is not strongly connected".into());
    }
    let walk = closed_walk_all_vertices(&g).map_err(|e| e.to_string())?;
    let table = a.detect_constant_family().map_err(|e| e.to_string())?;
    replay_walk(a, &table, &walk).map_err(|e| e.to_string())?;
    Ok(format!(
        "walk of length {} replayed in the automaton",
        walk.labels.len()
    ))
}

fn suite_density(a: &Dfao) -> SuiteResult {
    let p = a.p();
    let kmax = 4;
    let fractions = zero_density(a, kmax);
    for pair in fractions.windows(2) {
        if !pair[0].less_than(&pair[1]) {
            return Err(format!("not increasing: {} then {}", pair[0], pair[1]));
        }
    }
    for k in 1..=2u32 {
        let total = p.pow(k);
        let zeros = (0..total).filter(|&n| catalan_mod(n, p) == 0).count() as u128;
        if fractions[k as usize - 1] != Fraction::reduced(zeros, total as u128) {
            return Err(format!(
                "k={k}: transfer count {} disagrees with oracle count {zeros}/{total}",
                fractions[k as usize - 1]
            ));
        }
    }
    Ok(format!(
        "strictly increasing through k={kmax}, oracle-checked to k=2"
    ))
}

fn cmd_selftest(p_list: Vec<u64>, bound: u64, seed: u64) -> CmdResult {
    let mut ps = p_list;
    ps.sort_unstable();
    ps.dedup();
    for &p in &ps {
        require_prime(p)?;
    }
    let mut checks = 0usize;
    let mut failures = 0usize;
    for &p in &ps {
        let a = synthesize(p)?;
        let suites: Vec<(&str, SuiteResult)> = vec![
            (
                "oracle-equivalence",
                suite_oracle_equivalence(&a, bound, seed),
            ),
            ("coverage", suite_coverage(&a)),
            ("decomposition", suite_decomposition(p)),
            ("constant-family", suite_family(&a)),
            ("graph-walk", suite_graph_walk(&a)),
            ("zero-density", suite_density(&a)),
        ];
        for (name, result) in suites {
            checks += 1;
            match result {
                Ok(detail) => println!("p={p} {name}: pass ({detail})"),
                Err(reason) => {
                    failures += 1;
                    println!("p={p} {name}: FAIL ({reason})");
                }
            }
        }
    }
    println!("selftest: {} of {checks} checks passed", checks - failures);
    if failures > 0 {
        return Err(Failure::Property(format!(
            "{failures} selftest checks failed"
        )));
    }
    Ok(())
}
