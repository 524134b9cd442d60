//! Bounded grid search for solutions `(B^a, B^b, B^c)` at fixed heights,
//! with JSON Lines output and a resumable plain-text checkpoint.
//!
//! Cells `(a, b)` of the grid are processed in fixed-size batches on a
//! worker pool. Results of a batch are written in cell order before the
//! checkpoint moves past it, so output never depends on the worker count
//! and an interrupted run resumes to byte-identical files.

use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equality::{
    is_trivial_solution, solve_gamma, verify_instance, EquationInstance, Method, Outcome,
};
use crate::error::{Error, Result};
use crate::exact::{check_base, Rational};

pub const RESULTS_FILE: &str = "results.jsonl";
pub const UNKNOWNS_FILE: &str = "unknowns.jsonl";
pub const CHECKPOINT_FILE: &str = "checkpoint.txt";
pub const SUMMARY_FILE: &str = "summary.txt";

const CHECKPOINT_HEADER: &str = "powertower-search-checkpoint 1";
const BATCH_CELLS: u64 = 64;

/// All reduced `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`, ordered by
/// denominator, then `|p|`, negative first.
pub fn enumerate_rationals(max_num: u64, max_den: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for d in 1..=max_den.max(1) {
        for p in 1..=max_num {
            if p.gcd(&d) == 1 {
                let (p, d) = (p as i64, d as i64);
                out.push(Rational::new(-p, d).expect("nonzero"));
                out.push(Rational::new(p, d).expect("nonzero"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub base: u64,
    pub k: i64,
    pub m: i64,
    pub n: i64,
    pub max_numerator: u64,
    pub max_denominator: u64,
    pub interval_bits: u64,
    /// Skip `(b, a)` once `(a, b)` is done; only meaningful when `k = m`.
    pub dedup_symmetric: bool,
    pub output: PathBuf,
    pub workers: usize,
    /// Stop after this many cells in one invocation (for staged runs).
    pub stop_after: Option<u64>,
}

impl SearchConfig {
    pub fn new(
        base: u64,
        k: i64,
        m: i64,
        n: i64,
        max_numerator: u64,
        max_denominator: u64,
        output: impl Into<PathBuf>,
    ) -> Self {
        SearchConfig {
            base,
            k,
            m,
            n,
            max_numerator,
            max_denominator,
            interval_bits: crate::equality::DEFAULT_MAX_BITS,
            dedup_symmetric: true,
            output: output.into(),
            workers: 1,
            stop_after: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_base(self.base)?;
        for (name, h) in [("k", self.k), ("m", self.m), ("n", self.n)] {
            if h < 2 {
                return Err(Error::Domain(format!(
                    "height {name} must be >= 2, got {h}"
                )));
            }
        }
        if self.max_denominator < 1 {
            return Err(Error::Domain("max denominator must be at least 1".into()));
        }
        if self.interval_bits < 16 {
            return Err(Error::Domain(
                "interval precision must be at least 16 bits".into(),
            ));
        }
        Ok(())
    }

    fn dedup(&self) -> bool {
        self.dedup_symmetric && self.k == self.m
    }

    /// Everything that determines the output, one line.
    fn fingerprint(&self) -> String {
        format!(
            "base={} k={} m={} n={} max_num={} max_den={} bits={} dedup={}",
            self.base,
            self.k,
            self.m,
            self.n,
            self.max_numerator,
            self.max_denominator,
            self.interval_bits,
            self.dedup()
        )
    }
}

/// An instance that holds exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub k: i64,
    pub m: i64,
    pub n: i64,
    pub base: u64,
    pub verdict: Outcome,
    pub method: Method,
    pub trivial: bool,
    /// Logical time: the grid cell index that produced the record.
    pub timestamp: u64,
}

/// A candidate neither proved nor refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownRecord {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub k: i64,
    pub m: i64,
    pub n: i64,
    pub base: u64,
    pub width_log2: Option<i64>,
    pub detail: String,
    pub timestamp: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub grid_size: u64,
    pub cells_total: u64,
    pub cells_processed: u64,
    pub cells_solved_exactly: u64,
    pub instances_verified: u64,
    pub trivial: u64,
    pub nontrivial: u64,
    pub unknown: u64,
}

impl SearchStats {
    const FIELDS: usize = 8;

    fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} {} {} {}",
            self.grid_size,
            self.cells_total,
            self.cells_processed,
            self.cells_solved_exactly,
            self.instances_verified,
            self.trivial,
            self.nontrivial,
            self.unknown
        )
    }

    fn from_line(s: &str) -> Option<Self> {
        let v: Vec<u64> = s
            .split(' ')
            .map(|x| x.parse().ok())
            .collect::<Option<_>>()?;
        (v.len() == Self::FIELDS).then(|| SearchStats {
            grid_size: v[0],
            cells_total: v[1],
            cells_processed: v[2],
            cells_solved_exactly: v[3],
            instances_verified: v[4],
            trivial: v[5],
            nontrivial: v[6],
            unknown: v[7],
        })
    }
}

/// Progress persisted between invocations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchState {
    pub config: Option<String>,
    pub next_cell: u64,
    pub results_bytes: u64,
    pub unknowns_bytes: u64,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub solutions: Vec<SolutionRecord>,
    pub unknowns: Vec<UnknownRecord>,
    pub stats: SearchStats,
    pub complete: bool,
}

impl SearchReport {
    pub fn nontrivial(&self) -> impl Iterator<Item = &SolutionRecord> {
        self.solutions.iter().filter(|s| !s.trivial)
    }
}

fn corrupt(why: impl Into<String>) -> Error {
    Error::CorruptCheckpoint(why.into())
}

/// Reads the checkpoint at `path`; a missing file is a fresh start.
pub fn checkpoint_resume(path: &Path) -> Result<SearchState> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(SearchState::default()),
        Err(e) => return Err(e.into()),
    };
    let lines: Vec<&str> = text.lines().collect();
    let [header, config, next, results, unknowns, stats, end] = lines.as_slice() else {
        return Err(corrupt(format!("expected 7 lines, found {}", lines.len())));
    };
    if *header != CHECKPOINT_HEADER {
        return Err(corrupt(format!("unrecognized header {header:?}")));
    }
    if *end != "end" {
        return Err(corrupt("missing end marker"));
    }
    let field = |line: &str, key: &str| -> Result<String> {
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| corrupt(format!("expected '{key}' line, found {line:?}")))
    };
    let number = |line: &str, key: &str| -> Result<u64> {
        field(line, key)?
            .parse()
            .map_err(|_| corrupt(format!("bad number on '{key}' line")))
    };
    Ok(SearchState {
        config: Some(field(config, "config")?),
        next_cell: number(next, "next_cell")?,
        results_bytes: number(results, "results_bytes")?,
        unknowns_bytes: number(unknowns, "unknowns_bytes")?,
        stats: SearchStats::from_line(&field(stats, "stats")?)
            .ok_or_else(|| corrupt("bad stats line"))?,
    })
}

fn write_checkpoint(path: &Path, state: &SearchState) -> Result<()> {
    let mut text = String::new();
    writeln!(text, "{CHECKPOINT_HEADER}").expect("string write");
    writeln!(text, "config {}", state.config.as_deref().unwrap_or("")).expect("string write");
    writeln!(text, "next_cell {}", state.next_cell).expect("string write");
    writeln!(text, "results_bytes {}", state.results_bytes).expect("string write");
    writeln!(text, "unknowns_bytes {}", state.unknowns_bytes).expect("string write");
    writeln!(text, "stats {}", state.stats.to_line()).expect("string write");
    writeln!(text, "end").expect("string write");
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Default)]
struct CellOutput {
    solutions: Vec<SolutionRecord>,
    unknowns: Vec<UnknownRecord>,
    processed: bool,
    exact: bool,
    verified: u64,
}

fn process_cell(cfg: &SearchConfig, grid: &[Rational], cell: u64) -> CellOutput {
    let g = grid.len() as u64;
    let (i, j) = ((cell / g) as usize, (cell % g) as usize);
    if cfg.dedup() && j < i {
        return CellOutput::default();
    }
    let (a, b) = (&grid[i], &grid[j]);
    let mut out = CellOutput {
        processed: true,
        ..CellOutput::default()
    };
    let instance = |c: &Rational| {
        EquationInstance::new(
            cfg.base,
            a.clone(),
            b.clone(),
            c.clone(),
            cfg.k,
            cfg.m,
            cfg.n,
        )
    };
    let (candidates, exact) = match solve_gamma(cfg.base, a, b, cfg.k, cfg.m, cfg.n) {
        Ok(cs) => (cs, true),
        Err(_) => (grid.to_vec(), false),
    };
    out.exact = exact;
    for c in candidates {
        out.verified += 1;
        let v = match instance(&c).and_then(|inst| verify_instance(&inst, cfg.interval_bits)) {
            Ok(v) => v,
            Err(e) => {
                out.unknowns
                    .push(unknown(cfg, a, b, &c, None, e.to_string(), cell));
                continue;
            }
        };
        match v.outcome {
            Outcome::Equal => out.solutions.push(SolutionRecord {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                k: cfg.k,
                m: cfg.m,
                n: cfg.n,
                base: cfg.base,
                verdict: v.outcome,
                method: v.method,
                trivial: is_trivial_solution(a, b, &c, cfg.k, cfg.m, cfg.n),
                timestamp: cell,
            }),
            Outcome::Unknown => {
                out.unknowns
                    .push(unknown(cfg, a, b, &c, v.width_log2, v.detail, cell))
            }
            Outcome::NotEqual if exact => out.unknowns.push(unknown(
                cfg,
                a,
                b,
                &c,
                None,
                format!("solver candidate rejected on re-verification: {}", v.detail),
                cell,
            )),
            Outcome::NotEqual => {}
        }
    }
    out.solutions.sort_by(|x, y| x.c.cmp(&y.c));
    out.unknowns.sort_by(|x, y| x.c.cmp(&y.c));
    out
}

fn unknown(
    cfg: &SearchConfig,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    width_log2: Option<i64>,
    detail: String,
    cell: u64,
) -> UnknownRecord {
    UnknownRecord {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        k: cfg.k,
        m: cfg.m,
        n: cfg.n,
        base: cfg.base,
        width_log2,
        detail,
        timestamp: cell,
    }
}

fn open_output(path: &Path, fresh: bool, keep: u64) -> Result<File> {
    if fresh {
        return Ok(File::create(path)?);
    }
    let mut f = OpenOptions::new()
        .read(true)
        .write(true)
        .open(path)
        .map_err(|e| corrupt(format!("{} is missing: {e}", path.display())))?;
    let len = f.metadata()?.len();
    if len < keep {
        return Err(corrupt(format!(
            "{} holds {len} bytes, checkpoint expects {keep}",
            path.display()
        )));
    }
    f.set_len(keep)?;
    f.seek(SeekFrom::End(0))?;
    Ok(f)
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let f = File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        );
    }
    Ok(out)
}

/// Runs (or resumes) a search, writing into `cfg.output`.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output)?;
    let grid = enumerate_rationals(cfg.max_numerator, cfg.max_denominator);
    let g = grid.len() as u64;
    let total = g * g;
    let ckpt = cfg.output.join(CHECKPOINT_FILE);
    let mut state = checkpoint_resume(&ckpt)?;
    let fresh = state.config.is_none();
    if fresh {
        state.config = Some(cfg.fingerprint());
        state.stats.grid_size = g;
        state.stats.cells_total = total;
    } else if state.config.as_deref() != Some(cfg.fingerprint().as_str()) {
        return Err(corrupt(
            "checkpoint was written for a different search configuration",
        ));
    } else if state.next_cell > total {
        return Err(corrupt("checkpoint is past the end of the grid"));
    }
    let results_path = cfg.output.join(RESULTS_FILE);
    let unknowns_path = cfg.output.join(UNKNOWNS_FILE);
    let mut results = open_output(&results_path, fresh, state.results_bytes)?;
    let mut unknowns = open_output(&unknowns_path, fresh, state.unknowns_bytes)?;
    if fresh {
        write_checkpoint(&ckpt, &state)?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Io(format!("worker pool: {e}")))?;
    let budget_end = cfg
        .stop_after
        .map_or(total, |s| (state.next_cell + s).min(total));
    while state.next_cell < budget_end {
        let start = state.next_cell;
        let end = (start + BATCH_CELLS).min(budget_end);
        let outputs: Vec<CellOutput> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|cell| process_cell(cfg, &grid, cell))
                .collect()
        });
        let (mut rbuf, mut ubuf) = (String::new(), String::new());
        for out in outputs {
            let st = &mut state.stats;
            st.cells_processed += out.processed as u64;
            st.cells_solved_exactly += out.exact as u64;
            st.instances_verified += out.verified;
            for s in &out.solutions {
                if s.trivial {
                    st.trivial += 1;
                } else {
                    st.nontrivial += 1;
                }
                rbuf.push_str(&serde_json::to_string(s).expect("serializable"));
                rbuf.push('\n');
            }
            for u in &out.unknowns {
                st.unknown += 1;
                ubuf.push_str(&serde_json::to_string(u).expect("serializable"));
                ubuf.push('\n');
            }
        }
        results.write_all(rbuf.as_bytes())?;
        unknowns.write_all(ubuf.as_bytes())?;
        results.flush()?;
        unknowns.flush()?;
        state.results_bytes += rbuf.len() as u64;
        state.unknowns_bytes += ubuf.len() as u64;
        state.next_cell = end;
        write_checkpoint(&ckpt, &state)?;
    }
    let complete = state.next_cell >= total;
    let report = SearchReport {
        solutions: read_jsonl(&results_path)?,
        unknowns: read_jsonl(&unknowns_path)?,
        stats: state.stats.clone(),
        complete,
    };
    if complete {
        fs::write(cfg.output.join(SUMMARY_FILE), summary_text(cfg, &report))?;
    }
    Ok(report)
}

/// The human-readable report written next to the results.
pub fn summary_text(cfg: &SearchConfig, report: &SearchReport) -> String {
    let st = &report.stats;
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "powertower search report").expect("string write");
    writeln!(
        w,
        "equation: B^a^^{} * B^b^^{} = B^c^^{} with B = {}",
        cfg.k, cfg.m, cfg.n, cfg.base
    )
    .expect("string write");
    writeln!(
        w,
        "grid: reduced p/q with |p| <= {} and 1 <= q <= {} ({} values); bounds on numerator and denominator, not a height function",
        cfg.max_numerator, cfg.max_denominator, st.grid_size
    )
    .expect("string write");
    writeln!(
        w,
        "symmetric duplicates collapsed: {}",
        if cfg.dedup() { "yes" } else { "no" }
    )
    .expect("string write");
    writeln!(w, "interval budget: {} bits", cfg.interval_bits).expect("string write");
    writeln!(
        w,
        "cells: {} processed of {} ({} solved exactly for c, {} instances verified)",
        st.cells_processed, st.cells_total, st.cells_solved_exactly, st.instances_verified
    )
    .expect("string write");
    writeln!(
        w,
        "solutions: {} trivial, {} nontrivial",
        st.trivial, st.nontrivial
    )
    .expect("string write");
    writeln!(w, "unknown candidates: {}", st.unknown).expect("string write");
    writeln!(w, "nontrivial solutions (a, b, c):").expect("string write");
    for r in report.nontrivial() {
        writeln!(w, "  ({}, {}, {})  {}", r.a, r.b, r.c, r.method).expect("string write");
    }
    s
}

/// Result of scanning the family `(q, q, 2q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyScan {
    pub solutions: Vec<Rational>,
    pub unknowns: Vec<Rational>,
}

/// The `q` on the grid for which `B^q↑↑k · B^q↑↑m = B^(2q)↑↑n` holds.
pub fn family_scan(
    base: u64,
    heights: (i64, i64, i64),
    max_num: u64,
    max_den: u64,
    bits: u64,
) -> Result<FamilyScan> {
    let (k, m, n) = heights;
    EquationInstance::new(
        base,
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        k,
        m,
        n,
    )?;
    let grid = enumerate_rationals(max_num, max_den);
    let outcomes: Vec<(Rational, Outcome)> = grid
        .par_iter()
        .map(|q| {
            let two_q = q * &Rational::from(2);
            let outcome = EquationInstance::new(base, q.clone(), q.clone(), two_q, k, m, n)
                .and_then(|inst| verify_instance(&inst, bits))
                .map_or(Outcome::Unknown, |v| v.outcome);
            (q.clone(), outcome)
        })
        .collect();
    let mut scan = FamilyScan::default();
    for (q, o) in outcomes {
        match o {
            Outcome::Equal => scan.solutions.push(q),
            Outcome::Unknown => scan.unknowns.push(q),
            Outcome::NotEqual => {}
        }
    }
    scan.solutions.sort();
    scan.unknowns.sort();
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn enumeration() {
        assert_eq!(
            enumerate_rationals(1, 2),
            qs(&["0", "-1", "1", "-1/2", "1/2"])
        );
        assert_eq!(enumerate_rationals(0, 5), qs(&["0"]));
        let grid = enumerate_rationals(4, 3);
        assert_eq!(grid.len(), 19);
        // independent count: gcd-filtered pairs
        let brute = (1..=3i64)
            .flat_map(|d| (-4..=4i64).map(move |p| (p, d)))
            .filter(|&(p, d)| p.gcd(&d) == 1 || (p == 0 && d == 1))
            .count();
        assert_eq!(grid.len(), brute);
        let mut sorted = grid.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), grid.len());
    }

    #[test]
    fn family_examples() {
        let scan = family_scan(2, (3, 3, 3), 6, 3, 256).unwrap();
        assert_eq!(scan.solutions, qs(&["-1", "0"]));
        let scan = family_scan(2, (2, 2, 3), 6, 3, 256).unwrap();
        assert_eq!(scan.solutions, qs(&["-1/2", "0"]));
        let scan = family_scan(2, (3, 3, 2), 6, 3, 256).unwrap();
        assert_eq!(scan.solutions, qs(&["0", "1"]));
        assert!(scan.unknowns.is_empty());
    }

    #[test]
    fn checkpoint_states() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(CHECKPOINT_FILE);
        assert_eq!(checkpoint_resume(&path).unwrap(), SearchState::default());
        let state = SearchState {
            config: Some("base=2".into()),
            next_cell: 5,
            results_bytes: 10,
            unknowns_bytes: 0,
            stats: SearchStats {
                grid_size: 3,
                ..SearchStats::default()
            },
        };
        write_checkpoint(&path, &state).unwrap();
        assert_eq!(checkpoint_resume(&path).unwrap(), state);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(
            checkpoint_resume(&path),
            Err(Error::CorruptCheckpoint(_))
        ));
    }

    #[test]
    fn small_search() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SearchConfig::new(2, 3, 3, 2, 2, 2, dir.path());
        let report = run_search(&cfg).unwrap();
        assert!(report.complete);
        let nontrivial: Vec<_> = report
            .nontrivial()
            .map(|r| (r.a.clone(), r.b.clone(), r.c.clone()))
            .collect();
        assert_eq!(nontrivial, vec![(q("1"), q("1"), q("2"))]);
        assert!(report.solutions.iter().any(|r| r.trivial && r.a.is_zero()));
        assert!(fs::read_to_string(dir.path().join(SUMMARY_FILE))
            .unwrap()
            .contains("(1, 1, 2)"));
    }
}
