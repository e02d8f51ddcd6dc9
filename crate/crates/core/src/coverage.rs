//! Minimal witnesses per residue, certificates that every residue recurs
//! infinitely often, and exact zero-density tables.

use std::collections::BTreeMap;

use crate::algebra::{digits_lsd, Residue};
use crate::automaton::{Dfao, PumpingCertificate};
use crate::oracle::catalan_mod;
use crate::{Error, Result};

/// Least n with C_n congruent to a given residue, plus its digit string
/// (least-significant-first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: u64,
    pub digits: Vec<u32>,
}

/// Minimal witnesses per residue. `scanned_to` is the exclusive bound
/// below which the producing method exhausted all indices, so a missing
/// residue is genuinely absent below it and every present witness is
/// minimal. A table with all p residues present is complete.
#[derive(Clone, Debug)]
pub struct CoverageTable {
    pub p: u64,
    witnesses: BTreeMap<Residue, Witness>,
    pub scanned_to: u64,
}

impl CoverageTable {
    pub fn witness(&self, r: Residue) -> Option<&Witness> {
        self.witnesses.get(&r)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (Residue, &Witness)> {
        self.witnesses.iter().map(|(&r, w)| (r, w))
    }

    pub fn is_complete(&self) -> bool {
        self.witnesses.len() as u64 == self.p
    }

    pub fn missing(&self) -> Vec<Residue> {
        (0..self.p)
            .filter(|r| !self.witnesses.contains_key(r))
            .collect()
    }

    pub fn max_witness(&self) -> Option<u64> {
        self.witnesses.values().map(|w| w.n).max()
    }
}

/// Linear oracle scan. With no explicit bound the scan tries p^4, then
/// extends by factors of p up to p^6 before giving up; stopping early is
/// data (a partial table), never an error.
pub fn coverage_scan(p: u64, bound: Option<u64>) -> CoverageTable {
    let limits: Vec<u64> = match bound {
        Some(b) => vec![b],
        None => vec![
            p.saturating_pow(4),
            p.saturating_pow(5),
            p.saturating_pow(6),
        ],
    };
    let mut witnesses: BTreeMap<Residue, Witness> = BTreeMap::new();
    let mut n = 0u64;
    'scan: for &limit in &limits {
        while n < limit {
            if witnesses.len() as u64 == p {
                break 'scan;
            }
            let r = catalan_mod(n, p);
            witnesses.entry(r).or_insert_with(|| Witness {
                n,
                digits: digits_lsd(n, p),
            });
            n += 1;
        }
    }
    CoverageTable {
        p,
        witnesses,
        scanned_to: n,
    }
}

/// Minimal witnesses through the automaton: dynamic programming over
/// digit-string length. Level L holds, per state, the least value of any
/// L-digit string reaching it; a witness candidate closes the string with
/// a non-zero most significant digit (except n = 0, covered at L = 1).
/// Must agree with coverage_scan wherever both are complete.
pub fn coverage_bfs(a: &Dfao) -> CoverageTable {
    let p = a.p();
    let n_states = a.state_count();
    let mut witnesses: BTreeMap<Residue, Witness> = BTreeMap::new();
    let record = |witnesses: &mut BTreeMap<Residue, Witness>, r: Residue, v: u128| {
        let n = u64::try_from(v).expect("witness exceeds u64");
        witnesses.entry(r).or_insert_with(|| Witness {
            n,
            digits: digits_lsd(n, p),
        });
    };
    // length 1: every single digit is canonical, including [0]
    let mut arb: Vec<Option<u128>> = vec![None; n_states];
    for d in 0..p as u32 {
        let t = a.next(a.q0(), d);
        if arb[t as usize].is_none() {
            arb[t as usize] = Some(d as u128);
        }
        record(&mut witnesses, a.output_of(t), d as u128);
    }
    let mut pw = 1u128; // p^{L-1}
    while witnesses.len() as u64 != p {
        pw = match pw.checked_mul(p as u128) {
            Some(x) => x,
            None => break,
        };
        let mut next: Vec<Option<u128>> = vec![None; n_states];
        let mut level_best: BTreeMap<Residue, u128> = BTreeMap::new();
        for (s, slot) in arb.iter().enumerate() {
            let Some(base) = *slot else { continue };
            for d in 0..p as u32 {
                let t = a.next(s as u32, d);
                let v = base + d as u128 * pw;
                if next[t as usize].is_none_or(|cur| v < cur) {
                    next[t as usize] = Some(v);
                }
                if d > 0 {
                    let r = a.output_of(t);
                    if !witnesses.contains_key(&r) {
                        let slot = level_best.entry(r).or_insert(v);
                        if v < *slot {
                            *slot = v;
                        }
                    }
                }
            }
        }
        for (r, v) in level_best {
            record(&mut witnesses, r, v);
        }
        arb = next;
    }
    CoverageTable {
        p,
        witnesses,
        scanned_to: u64::try_from(pw.saturating_mul(p as u128)).unwrap_or(u64::MAX),
    }
}

/// One residue's evidence of recurring infinitely often: a pumping
/// certificate plus the exact number of witnesses below p^6.
#[derive(Clone, Debug)]
pub struct InfinitudeEntry {
    pub residue: Residue,
    pub certificate: PumpingCertificate,
    pub count_below_p6: u128,
}

/// A pumping certificate for every residue, each re-verified at pump
/// counts j = 0..3, plus transfer counts below p^6.
pub fn infinitude_report(a: &Dfao) -> Result<Vec<InfinitudeEntry>> {
    let counts = a.transfer_counts(6);
    let mut entries = Vec::new();
    for r in 0..a.p() {
        let certificate = a.pumping_certificate(r)?;
        for j in 0..=3 {
            if a.eval_digits(&certificate.digits(j)) != r {
                return Err(Error::NoCertificate(r));
            }
        }
        entries.push(InfinitudeEntry {
            residue: r,
            certificate,
            count_below_p6: counts[&r],
        });
    }
    Ok(entries)
}

/// Exact rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

impl Fraction {
    pub fn reduced(num: u128, den: u128) -> Self {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// Exact order comparison by cross multiplication; callers keep
    /// num * den within u128 (p^k fits u64 in every supported workload).
    pub fn less_than(&self, other: &Fraction) -> bool {
        self.num * other.den < other.num * self.den
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Fraction of n < p^k with C_n divisible by p, for k = 1..=kmax.
/// Strictly increasing in k at desk scale, the finite shadow of the
/// zero set having asymptotic density 1.
pub fn zero_density(a: &Dfao, kmax: u32) -> Vec<Fraction> {
    (1..=kmax)
        .map(|k| {
            let count = a.transfer_counts(k)[&0];
            let den = (a.p() as u128).checked_pow(k).expect("p^k overflows u128");
            Fraction::reduced(count, den)
        })
        .collect()
}

/// How far the largest minimal witness sits below p^{13/2} (ln p)^6, the
/// scale at which all residue classes are guaranteed to have appeared.
/// Reported as a sanity margin, not a theorem check.
#[derive(Clone, Copy, Debug)]
pub struct GlsReport {
    pub p: u64,
    pub max_witness: u64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn gls_bound_report(p: u64, table: &CoverageTable) -> GlsReport {
    debug_assert!(table.is_complete());
    let max_witness = table.max_witness().unwrap_or(0);
    let bound = (p as f64).powf(6.5) * (p as f64).ln().powi(6);
    GlsReport {
        p,
        max_witness,
        bound,
        ratio: max_witness as f64 / bound,
    }
}
