//! Line incidences of finite point sets, and the collinearity structure of
//! `H_{1,p^m}`.

use std::collections::{BTreeMap, HashMap};

use num_integer::{Integer, Roots};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hyperbola::{enumerate_points, partition_classes, HyperbolaSpec, Point, PointSet};
use crate::ntcore::{mod_inverse, PrimePower};
use crate::{Error, Int, Rational, Result, Wide};

/// Primitive integer triple `(A, B, C)` of the line `Ax + By + C = 0`,
/// with the first nonzero of `A, B` positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineKey {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl LineKey {
    pub fn new(a: Int, b: Int, c: Int) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::DegeneratePair);
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Self { a, b, c })
    }

    pub fn contains(&self, pt: Point) -> bool {
        self.a as Wide * pt.x as Wide + self.b as Wide * pt.y as Wide + self.c as Wide == 0
    }

    /// The line `y = x`.
    pub const DIAGONAL: LineKey = LineKey { a: 1, b: -1, c: 0 };
}

pub fn line_through(p: Point, q: Point) -> Result<LineKey> {
    if p == q {
        return Err(Error::DegeneratePair);
    }
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    LineKey::new(dy, -dx, dx * p.y - dy * p.x)
}

/// Every spanned line with its number of points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceCensus {
    pub num_points: usize,
    /// Sorted by key; every entry has at least two points.
    pub lines: Vec<(LineKey, usize)>,
    pub histogram: BTreeMap<usize, u64>,
}

/// Histogram-only census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub num_points: usize,
    pub histogram: BTreeMap<usize, u64>,
}

impl CensusSummary {
    pub fn ordinary_count(&self) -> u64 {
        self.histogram.get(&2).copied().unwrap_or(0)
    }

    pub fn max_collinear(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn line_count(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// `sum_k histogram[k] * C(k, 2)`, which must equal `C(num_points, 2)`.
    pub fn pair_total(&self) -> u64 {
        self.histogram
            .iter()
            .map(|(&k, &c)| c * (k as u64) * (k as u64 - 1) / 2)
            .sum()
    }
}

impl IncidenceCensus {
    pub fn summary(&self) -> CensusSummary {
        CensusSummary {
            num_points: self.num_points,
            histogram: self.histogram.clone(),
        }
    }

    pub fn ordinary_count(&self) -> u64 {
        self.histogram.get(&2).copied().unwrap_or(0)
    }

    pub fn max_collinear(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn points_on(&self, key: &LineKey) -> usize {
        self.lines
            .binary_search_by(|(k, _)| k.cmp(key))
            .map(|i| self.lines[i].1)
            .unwrap_or(0)
    }

    pub fn line_map(&self) -> HashMap<LineKey, usize> {
        self.lines.iter().copied().collect()
    }
}

/// Recovers `t` from `t(t-1)/2 = pairs`.
fn points_from_pairs(pairs: u64) -> usize {
    let t = (1 + 8 * pairs).sqrt().div_ceil(2);
    assert_eq!(t * (t - 1) / 2, pairs, "pair count on a line is triangular");
    t as usize
}

fn has_duplicates(points: &[Point]) -> bool {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Full census: every unordered pair is keyed by its line, equal keys are
/// grouped, and each group of `t(t-1)/2` pairs is a line with `t` points.
pub fn census(points: &[Point]) -> Result<IncidenceCensus> {
    let k = points.len();
    if k < 2 {
        return Err(Error::TooFewPoints(k));
    }
    let mut keys: Vec<LineKey> = (0..k)
        .into_par_iter()
        .map(|i| {
            points[i + 1..]
                .iter()
                .map(|&q| line_through(points[i], q))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    keys.par_sort_unstable();

    let mut lines = Vec::new();
    let mut histogram = BTreeMap::new();
    for run in keys.chunk_by(|x, y| x == y) {
        let t = points_from_pairs(run.len() as u64);
        lines.push((run[0], t));
        *histogram.entry(t).or_insert(0) += 1;
    }
    Ok(IncidenceCensus {
        num_points: k,
        lines,
        histogram,
    })
}

const DY_OFFSET: Int = 1 << 31;

#[inline]
fn packed_direction(p: Point, q: Point) -> u64 {
    let (mut dx, mut dy) = (q.x - p.x, q.y - p.y);
    let g = dx.gcd(&dy);
    dx /= g;
    dy /= g;
    if dx < 0 || (dx == 0 && dy < 0) {
        dx = -dx;
        dy = -dy;
    }
    ((dx as u64) << 32) | (dy + DY_OFFSET) as u64
}

/// Histogram-only census by grouping directions around each anchor.
///
/// A line with `k` points, scanned in index order, shows its `r`-th point
/// `k - 1 - r` later points in one direction, so it contributes exactly one
/// direction group of each size `1..k`. With `E[s]` the number of groups of
/// size `s`, the number of lines with exactly `k` points is `E[k-1] - E[k]`.
/// Memory is `O(k)` per worker instead of `O(k^2)`.
pub fn census_summary(points: &[Point]) -> Result<CensusSummary> {
    let k = points.len();
    if k < 2 {
        return Err(Error::TooFewPoints(k));
    }
    if has_duplicates(points) {
        return Err(Error::DegeneratePair);
    }
    let groups = (0..k)
        .into_par_iter()
        .fold(
            || (vec![0u64; k], Vec::with_capacity(k)),
            |(mut e, mut buf): (Vec<u64>, Vec<u64>), i| {
                buf.clear();
                let p = points[i];
                for &q in &points[i + 1..] {
                    buf.push(packed_direction(p, q));
                }
                buf.sort_unstable();
                for run in buf.chunk_by(|x, y| x == y) {
                    e[run.len()] += 1;
                }
                (e, buf)
            },
        )
        .map(|(e, _)| e)
        .reduce(
            || vec![0u64; k],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
    let mut histogram = BTreeMap::new();
    for t in 2..=k {
        let exact = groups[t - 1] - groups.get(t).copied().unwrap_or(0);
        if exact > 0 {
            histogram.insert(t, exact);
        }
    }
    Ok(CensusSummary {
        num_points: k,
        histogram,
    })
}

pub fn points_on_line(ps: &PointSet, key: &LineKey) -> usize {
    ps.points.iter().filter(|&&p| key.contains(p)).count()
}

/// Ordinary-line count of `H_{a,n}` (zero when it has fewer than two points).
pub fn ordinary_count_for(a: Int, n: Int) -> Result<u64> {
    let ps = enumerate_points(HyperbolaSpec::new(a, n)?);
    if ps.len() < 2 {
        return Ok(0);
    }
    Ok(census_summary(&ps.points)?.ordinary_count())
}

/// Moduli `n` in `[2, n_max]` for which `H_{1,n}` spans no ordinary line.
pub fn no_ordinary_moduli(n_max: Int) -> Result<Vec<Int>> {
    let counts: Vec<(Int, u64)> = (2..=n_max)
        .into_par_iter()
        .map(|n| ordinary_count_for(1, n).map(|c| (n, c)))
        .collect::<Result<_>>()?;
    Ok(counts
        .into_iter()
        .filter(|&(_, c)| c == 0)
        .map(|(n, _)| n)
        .collect())
}

/// Number of points of `H_{p^m}` on the anti-diagonal `x + y = p^m + 2`.
pub fn check_special_line(pp: PrimePower) -> Result<usize> {
    if pp.n() <= 8 || pp.m() < 2 {
        return Err(Error::OutOfScope(format!(
            "special line needs p^m > 8 and m >= 2, got {}",
            pp.n()
        )));
    }
    let ps = enumerate_points(HyperbolaSpec::new(1, pp.n())?);
    let line = LineKey::new(1, 1, -(pp.n() + 2))?;
    Ok(points_on_line(&ps, &line))
}

/// Expected size of the special line: `p^floor(m/2) - 1`.
pub fn special_line_expected(pp: PrimePower) -> usize {
    (pp.p_pow(pp.m() / 2) - 1) as usize
}

/// Lower bound on ordinary lines of `H_{p^m}` with the constant table used
/// for assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem6Bound {
    pub p: Int,
    pub m: u32,
    pub c_constant: Rational,
    pub bound: Rational,
    pub equality_expected: bool,
    /// Large-modulus constant (1/2 for p = 2, 3/4 otherwise); reported only.
    pub asymptotic_c: Rational,
}

pub fn c_constant(pp: PrimePower) -> Rational {
    match (pp.m(), pp.n()) {
        (1, _) => Rational::from_integer(0),
        (_, 4) => Rational::new(1, 2),
        (_, 8) => Rational::from_integer(0),
        (_, 49) => Rational::new(6, 7),
        _ => Rational::new(6, 13),
    }
}

pub fn theorem6_bound(pp: PrimePower) -> Theorem6Bound {
    let p = pp.p() as Wide;
    let q = pp.p_pow(pp.m() - 1) as Wide;
    let c = c_constant(pp);
    let inner = Rational::new(q * (p - 2), 2) + c;
    let bound = inner * Rational::from_integer(q * (p - 1));
    Theorem6Bound {
        p: pp.p(),
        m: pp.m(),
        c_constant: c,
        bound,
        equality_expected: pp.m() == 1 || matches!(pp.n(), 4 | 8 | 49),
        asymptotic_c: if pp.p() == 2 {
            Rational::new(1, 2)
        } else {
            Rational::new(3, 4)
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem6Report {
    pub n: Int,
    pub ordinary: u64,
    pub bound: Rational,
    pub bound_ceil: Wide,
    pub satisfied: bool,
    pub equality: bool,
    pub equality_expected: bool,
}

impl Theorem6Report {
    pub fn pass(&self) -> bool {
        self.satisfied && self.equality == self.equality_expected
    }
}

pub fn verify_theorem6(pp: PrimePower) -> Result<Theorem6Report> {
    if pp.n() < 3 {
        return Err(Error::OutOfScope("bound check needs p^m >= 3".into()));
    }
    let ps = enumerate_points(HyperbolaSpec::new(1, pp.n())?);
    let ordinary = census_summary(&ps.points)?.ordinary_count();
    let b = theorem6_bound(pp);
    let ceil = b.bound.ceil().to_integer();
    let n_rat = Rational::from_integer(ordinary as Wide);
    Ok(Theorem6Report {
        n: pp.n(),
        ordinary,
        bound: b.bound,
        bound_ceil: ceil,
        satisfied: ordinary as Wide >= ceil,
        equality: n_rat == b.bound,
        equality_expected: b.equality_expected,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineViolation {
    pub line: LineKey,
    pub points: usize,
    pub property: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma7Report {
    pub n: Int,
    pub lines_checked: usize,
    pub rich_lines: usize,
    pub violations: Vec<LineViolation>,
}

impl Lemma7Report {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn odd_prime_power(ps: &PointSet, min_m: u32) -> Result<PrimePower> {
    let pp = ps
        .spec
        .prime_power()
        .ok_or(Error::NotPrimePower(ps.spec.n()))?;
    if pp.p() == 2 || pp.m() < min_m {
        return Err(Error::OutOfScope(format!(
            "needs an odd prime power with m >= {min_m}, got {}",
            pp.n()
        )));
    }
    Ok(pp)
}

/// Checks the structure of every spanned line of `H_{a,p^m}` (`p` odd, `m >= 2`):
///
/// * `p` divides neither `A` nor `B`;
/// * `C^2 - 4AB = 0 (mod p)` exactly when all points of the line share one
///   class `i`, and then `i = -C (2A)^{-1} (mod p)`;
/// * lines with three or more points lie in one class and have `p` not
///   dividing `C`;
/// * a line with `C = 0` is `y = x` and carries two points.
pub fn verify_lemma7(ps: &PointSet) -> Result<Lemma7Report> {
    let pp = odd_prime_power(ps, 2)?;
    let p = pp.p();
    // Substituting y = -(Ax + C)/B into xy = a gives Ax^2 + Cx + aB, so `a` enters the discriminant.
    let a = ps.spec.a() as Wide;
    let full = census(&ps.points)?;
    let mut violations = Vec::new();
    let mut rich_lines = 0;

    let mut members: HashMap<LineKey, Vec<Point>> = HashMap::new();
    for (i, &pt) in ps.points.iter().enumerate() {
        for &q in &ps.points[i + 1..] {
            let key = line_through(pt, q)?;
            let entry = members.entry(key).or_default();
            if entry.is_empty() {
                entry.push(pt);
            }
            if !entry.contains(&q) {
                entry.push(q);
            }
        }
    }

    for &(line, count) in &full.lines {
        let mut flag = |what: &str| {
            violations.push(LineViolation {
                line,
                points: count,
                property: what.to_string(),
            })
        };
        let pts = &members[&line];
        let classes: Vec<Int> = pts.iter().map(|q| q.x.rem_euclid(p)).collect();
        let one_class = classes.windows(2).all(|w| w[0] == w[1]);

        if (line.a as Wide * line.b as Wide).rem_euclid(p as Wide) == 0 {
            flag("p divides AB");
        }
        let disc = (line.c as Wide).pow(2) - 4 * a * line.a as Wide * line.b as Wide;
        let disc_zero = disc.rem_euclid(p as Wide) == 0;
        if disc_zero != one_class {
            flag("discriminant vanishes mod p iff single class");
        }
        if disc_zero && line.a.rem_euclid(p) != 0 {
            let inv = mod_inverse(2 * line.a, p)?;
            let i = (-(line.c as Wide) * inv as Wide).rem_euclid(p as Wide) as Int;
            if classes[0] != i {
                flag("class index equals -C/(2A) mod p");
            }
        }
        if count >= 3 {
            rich_lines += 1;
            if !one_class {
                flag("rich line spans several classes");
            }
            if line.c.rem_euclid(p) == 0 {
                flag("p divides C on a rich line");
            }
        }
        if a == 1 && line.c == 0 && (line != LineKey::DIAGONAL || count != 2) {
            flag("line through origin is not y = x with two points");
        }
    }
    Ok(Lemma7Report {
        n: pp.n(),
        lines_checked: full.lines.len(),
        rich_lines,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollinearityReport {
    pub n: Int,
    pub max_collinear: usize,
    /// `2 p^floor(m/2)`.
    pub bound: usize,
    /// Classes whose points all lie on one line (must be empty for `m >= 2`).
    pub collinear_classes: Vec<Int>,
    /// Distinct lines spanned by each class; informational.
    pub class_line_counts: BTreeMap<Int, u64>,
    /// `p^{2(m-1)}`, the scale of a quadratic lower bound on class line counts.
    pub class_line_scale: Wide,
}

impl CollinearityReport {
    pub fn pass(&self) -> bool {
        self.max_collinear <= self.bound && self.collinear_classes.is_empty()
    }
}

fn all_collinear(pts: &[Point]) -> bool {
    match pts {
        [p, q, rest @ ..] => {
            let key = line_through(*p, *q).expect("distinct points");
            rest.iter().all(|&r| key.contains(r))
        }
        _ => true,
    }
}

pub fn verify_collinearity_bounds(ps: &PointSet) -> Result<CollinearityReport> {
    let pp = odd_prime_power(ps, 1)?;
    let summary = census_summary(&ps.points)?;
    let partition = partition_classes(ps)?;
    let mut collinear_classes = Vec::new();
    let mut class_line_counts = BTreeMap::new();
    for (&i, pts) in &partition.classes {
        if pp.m() >= 2 && all_collinear(pts) {
            collinear_classes.push(i);
        }
        let lines = if pts.len() >= 2 {
            census_summary(pts)?.line_count()
        } else {
            0
        };
        class_line_counts.insert(i, lines);
    }
    Ok(CollinearityReport {
        n: pp.n(),
        max_collinear: summary.max_collinear(),
        bound: 2 * pp.p_pow(pp.m() / 2) as usize,
        collinear_classes,
        class_line_counts,
        class_line_scale: (pp.p_pow(pp.m() - 1) as Wide).pow(2),
    })
}

/// Pairs from distinct classes whose line carries more than two points.
pub fn cross_class_rich_pairs(ps: &PointSet, full: &IncidenceCensus) -> Result<Vec<(Point, Point)>> {
    let p = odd_prime_power(ps, 1)?.p();
    let map = full.line_map();
    let mut bad = Vec::new();
    for (i, &a) in ps.points.iter().enumerate() {
        for &b in &ps.points[i + 1..] {
            if a.x % p != b.x % p && map[&line_through(a, b)?] != 2 {
                bad.push((a, b));
            }
        }
    }
    Ok(bad)
}
