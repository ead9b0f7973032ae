//! Enumeration of ring elements by norm, with congruence filters.
//!
//! Output order is always `(norm, a, b)` ascending, so index ranges of the
//! stream are reproducible partitions for parallel consumers.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::rings::{euler_phi, is_prime_element, EisInt, GaussInt, QuadInt, Ring};

/// Which elements a query keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    /// Every element, zero included.
    All,
    Primary,
    CoprimeToRamified,
    /// Primary elements that are `j`-th powers (of a primary element).
    JthPowerPrimary(u8),
    /// Primary primes.
    PrimaryPrime,
}

impl Filter {
    fn keeps<R: QuadInt>(&self, z: &R) -> bool {
        match self {
            Filter::All => true,
            Filter::Primary => z.is_primary(),
            Filter::CoprimeToRamified => !z.is_zero() && z.is_coprime_to_ramified(),
            Filter::PrimaryPrime => z.is_primary() && is_prime_element(*z),
            Filter::JthPowerPrimary(_) => unreachable!("generated, not scanned"),
        }
    }
}

impl std::str::FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Filter::All),
            "primary" => Ok(Filter::Primary),
            "coprime" | "coprime-to-ramified" => Ok(Filter::CoprimeToRamified),
            "prime" | "primary-prime" => Ok(Filter::PrimaryPrime),
            _ => match s.strip_prefix("power") {
                Some(j) => j
                    .trim_start_matches(['-', ':'])
                    .parse::<u8>()
                    .ok()
                    .filter(|j| (2..=4).contains(j))
                    .map(Filter::JthPowerPrimary)
                    .ok_or_else(|| format!("bad power filter {s:?} (expected power2..power4)")),
                None => Err(format!(
                    "unknown filter {s:?} (expected all, primary, coprime, prime, powerJ)"
                )),
            },
        }
    }
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn ceil_sqrt(n: i128) -> i128 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Appends the coordinate intervals `[lo_a, hi_a]` in row `b` whose
/// elements have norm in `[lo, hi)`. Returns false once the row is empty
/// for every larger `|b|`.
fn row_intervals(ring: Ring, b: i64, lo: i64, hi: i64, out: &mut Vec<(i64, i64)>) -> bool {
    let (b, lo, top) = (b as i128, lo as i128, hi as i128 - 1);
    // Write the norm as s^2 + c*b^2 over d, with a = (s + shift)/d.
    let (scale, cb2) = match ring {
        Ring::Gauss => (1, b * b),
        Ring::Eisenstein => (4, 3 * b * b),
    };
    let outer_sq = scale * top - cb2;
    if outer_sq < 0 {
        return false;
    }
    let outer = isqrt(outer_sq);
    let inner_sq = scale * lo - cb2;
    let to_a = |s1: i128, s2: i128| -> Option<(i64, i64)> {
        let (a1, a2) = match ring {
            Ring::Gauss => (s1, s2),
            Ring::Eisenstein => (-((-(s1 + b)).div_euclid(2)), (s2 + b).div_euclid(2)),
        };
        (a1 <= a2).then_some((a1 as i64, a2 as i64))
    };
    if inner_sq <= 0 {
        out.extend(to_a(-outer, outer));
    } else {
        let inner = ceil_sqrt(inner_sq);
        if inner <= outer {
            out.extend(to_a(-outer, -inner));
            out.extend(to_a(inner, outer));
        }
    }
    true
}

/// Elements with norm in `[lo, hi)` passing a scan filter, sorted.
fn scan_band<R: QuadInt>(lo: i64, hi: i64, filter: Filter) -> Vec<R> {
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(2);
    for sign in [1i64, -1] {
        let mut b = if sign == 1 { 0 } else { -1 };
        loop {
            rows.clear();
            if !row_intervals(R::RING, b, lo, hi, &mut rows) {
                break;
            }
            for &(a1, a2) in &rows {
                for a in a1..=a2 {
                    let z = R::new(a, b);
                    if filter.keeps(&z) {
                        out.push(z);
                    }
                }
            }
            b += sign;
        }
    }
    out.sort_by_key(|z| (z.norm(), z.a(), z.b()));
    out
}

/// Primary `j`-th powers with norm in `[lo, hi)`, sorted.
fn jth_powers<R: QuadInt>(j: u8, lo: i64, hi: i64) -> Vec<R> {
    let mut bound = (hi.max(1) as f64).powf(1.0 / j as f64).ceil() as i64 + 1;
    while bound > 1 && (bound - 1).checked_pow(j as u32).is_none_or(|v| v >= hi) {
        bound -= 1;
    }
    let mut out: Vec<R> = scan_band::<R>(0, bound, Filter::Primary)
        .into_iter()
        .map(|m| m.pow(j as u32))
        .filter(|n| (lo..hi).contains(&n.norm()))
        .collect();
    out.sort_by_key(|z| (z.norm(), z.a(), z.b()));
    out
}

/// Elements with `lo <= norm < hi` passing `filter`, in `(norm, a, b)` order.
pub fn enumerate_range<R: QuadInt>(lo: i64, hi: i64, filter: Filter) -> Vec<R> {
    let lo = lo.max(0);
    if hi <= lo {
        return Vec::new();
    }
    match filter {
        Filter::JthPowerPrimary(j) => jth_powers(j, lo, hi),
        _ => scan_band(lo, hi, filter),
    }
}

/// Streaming enumeration of all elements with `norm <= max_norm`.
pub struct Enumeration<R> {
    filter: Filter,
    next_lo: i64,
    end: i64,
    band: i64,
    buf: VecDeque<R>,
}

impl<R: QuadInt> Iterator for Enumeration<R> {
    type Item = R;

    fn next(&mut self) -> Option<R> {
        while self.buf.is_empty() && self.next_lo < self.end {
            let hi = (self.next_lo + self.band).min(self.end);
            self.buf.extend(enumerate_range::<R>(self.next_lo, hi, self.filter));
            self.next_lo = hi;
        }
        self.buf.pop_front()
    }
}

pub fn enumerate<R: QuadInt>(max_norm: i64, filter: Filter) -> Enumeration<R> {
    let end = max_norm.saturating_add(1).max(0);
    // jth powers are sparse and generated in one pass
    let band = match filter {
        Filter::JthPowerPrimary(_) => end.max(1),
        _ => 1 << 14,
    };
    Enumeration {
        filter,
        next_lo: 0,
        end,
        band,
        buf: VecDeque::new(),
    }
}

/// Ring-erased element for front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Gauss(GaussInt),
    Eisenstein(EisInt),
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Gauss(z) => z.fmt(f),
            Element::Eisenstein(z) => z.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeQuery {
    pub ring: Ring,
    pub max_norm: i64,
    pub filter: Filter,
}

impl LatticeQuery {
    pub fn new(ring: Ring, max_norm: i64, filter: Filter) -> Result<Self, String> {
        if max_norm < 1 {
            return Err(format!("max_norm must be at least 1, got {max_norm}"));
        }
        if let Filter::JthPowerPrimary(j) = filter {
            if !(2..=4).contains(&j) {
                return Err(format!("power filter needs j in 2..=4, got {j}"));
            }
        }
        Ok(LatticeQuery {
            ring,
            max_norm,
            filter,
        })
    }

    pub fn elements(&self) -> Box<dyn Iterator<Item = Element>> {
        match self.ring {
            Ring::Gauss => Box::new(enumerate::<GaussInt>(self.max_norm, self.filter).map(Element::Gauss)),
            Ring::Eisenstein => {
                Box::new(enumerate::<EisInt>(self.max_norm, self.filter).map(Element::Eisenstein))
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.elements().count() as u64
    }
}

/// Asymptotic density of primary elements: `#{n primary, N(n) <= x} ~ c x`.
pub fn primary_density(ring: Ring) -> f64 {
    match ring {
        Ring::Gauss => PI / 8.0,
        Ring::Eisenstein => 2.0 * PI / (9.0 * 3f64.sqrt()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CountReport {
    pub ring: Ring,
    pub x: i64,
    pub count: u64,
    pub main_term: f64,
    pub ratio: f64,
}

/// Exact number of primary elements with `1 <= N(n) <= x`.
pub fn count_primary(ring: Ring, x: i64) -> CountReport {
    let count = LatticeQuery {
        ring,
        max_norm: x,
        filter: Filter::Primary,
    }
    .count();
    let main_term = primary_density(ring) * x as f64;
    CountReport {
        ring,
        x,
        count,
        main_term,
        ratio: count as f64 / main_term,
    }
}

/// `sum phi(n)/N(n)` over primary `j`-th powers `n` with `N(n) <= x`;
/// `j = 3` lives on `Z[w]`, `j = 2, 4` on `Z[i]`.
pub fn sum_phi_over_jth_powers(j: u8, x: i64) -> f64 {
    fn go<R: QuadInt>(j: u8, x: i64) -> f64 {
        enumerate::<R>(x, Filter::JthPowerPrimary(j))
            .map(|n| euler_phi(n).expect("primary") as f64 / n.norm() as f64)
            .sum()
    }
    match j {
        3 => go::<EisInt>(j, x),
        _ => go::<GaussInt>(j, x),
    }
}

/// Leading coefficient `c` in `sum_{N(m) <= y, m primary} phi(m)/N(m) ~ c y`.
pub fn phi_density(ring: Ring, zeta2: f64) -> f64 {
    let ram = match ring {
        Ring::Gauss => 4.0,
        Ring::Eisenstein => 9.0,
    };
    primary_density(ring) / (zeta2 * (1.0 - 1.0 / ram))
}
