//! Distinct origin distances of modular hyperbolas.
//!
//! A point `(x, y)` of `H_{a,n}` is at squared distance `x^2 + y^2` from the
//! origin, and `y` is determined by `x`, so everything here works with the
//! map `d(x) = x^2 + (a x^{-1} mod n)^2` on units `x`. Square roots are never
//! taken: distinct distances are distinct squared distances.
//!
//! For `n = p^2` the units splitting over `x^2 = a (mod p)` form two
//! progressions `C1 = {b + tp}` and `C2 = {p - b + tp}`; the count of
//! distinct values comes down to how many values `d(C1)` and `d(C2)` share.
//! Those coincidences are found three ways: by direct evaluation, by lattice
//! points on two factored quadratics, and (when `j_p = 0`) by divisor pairs
//! of `2b`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::hyperbola::HyperbolaSpec;
use crate::ntcore::{
    divisors, is_prime, legendre, mod_inverse, mul_mod, next_prime, primes_up_to, sqrt_mod_prime,
    PrimePower,
};
use crate::{Error, Int, Rational, Result, Wide, MAX_MODULUS};

/// Squared distance `x^2 + y^2`; below `2^63` for every supported modulus.
pub type Dist = u64;

#[inline]
pub fn squared_distance(x: Int, y: Int) -> Dist {
    (x as Dist) * (x as Dist) + (y as Dist) * (y as Dist)
}

/// `d_{a,n}(x)` for a unit `x` (reduced modulo `n` first).
pub fn distance_of(spec: &HyperbolaSpec, x: Int) -> Result<Dist> {
    let x = x.rem_euclid(spec.n());
    Ok(squared_distance(x, spec.partner(x)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub spec: HyperbolaSpec,
    /// Each squared distance with its preimages `x`, ascending.
    pub value_map: BTreeMap<Dist, Vec<Int>>,
}

impl DistanceProfile {
    /// `#F_{a,n}`.
    pub fn distinct_count(&self) -> usize {
        self.value_map.len()
    }

    pub fn values(&self) -> impl Iterator<Item = Dist> + '_ {
        self.value_map.keys().copied()
    }
}

fn unit_distances(spec: &HyperbolaSpec) -> Vec<(Dist, Int)> {
    let n = spec.n();
    (1..n)
        .filter_map(|x| spec.partner(x).ok().map(|y| (squared_distance(x, y), x)))
        .collect()
}

pub fn distance_profile(spec: HyperbolaSpec) -> DistanceProfile {
    let mut value_map: BTreeMap<Dist, Vec<Int>> = BTreeMap::new();
    for (u, x) in unit_distances(&spec) {
        value_map.entry(u).or_default().push(x);
    }
    DistanceProfile { spec, value_map }
}

/// `#F_{a,n}` without retaining preimages.
pub fn distinct_distance_count(spec: HyperbolaSpec) -> usize {
    let mut v: Vec<Dist> = unit_distances(&spec).into_iter().map(|(u, _)| u).collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn require_odd_prime(p: Int) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `(p + (a/p)) / 2`, the distinct-distance count for a prime modulus.
pub fn prime_formula(a: Int, p: Int) -> Result<Int> {
    require_odd_prime(p)?;
    if a.rem_euclid(p) == 0 {
        return Err(Error::NotCoprime { a, n: p });
    }
    Ok((p + legendre(a, p) as Int) / 2)
}

/// Square roots of `a` and `-a` modulo `p` and the shift indices describing
/// inversion on the progressions through them modulo `p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtData {
    pub a: Int,
    pub p: Int,
    /// Root of `a` in `(0, p/2)`.
    pub b: Option<Int>,
    /// Root of `-a` in `(0, p/2)`.
    pub c_root: Option<Int>,
    /// `b (b + j_p p) = a (mod p^2)`.
    pub j_p: Option<Int>,
    /// `c (p - c + l_p p) = a (mod p^2)`.
    pub l_p: Option<Int>,
    /// `p - j_p - 2`, or `-1` when `j_p = p - 1`.
    pub k_p: Option<Int>,
}

/// Index `j` in `[0, p)` with `r (base + j p) = a (mod p^2)`, where `base` is
/// the residue of `a r^{-1}` modulo `p`.
fn shift_index(a: Int, p: Int, r: Int, base: Int) -> Int {
    let n = p * p;
    let partner = mul_mod(a, mod_inverse(r, n).expect("unit"), n);
    let diff = (partner - base).rem_euclid(n);
    debug_assert_eq!(diff % p, 0);
    diff / p
}

pub fn sqrt_data(a: Int, p: Int) -> Result<SqrtData> {
    require_odd_prime(p)?;
    if a.rem_euclid(p) == 0 {
        return Err(Error::NotCoprime { a, n: p });
    }
    let b = sqrt_mod_prime(a, p).ok().map(|(r, _)| r);
    let c_root = sqrt_mod_prime(-a, p).ok().map(|(r, _)| r);
    let j_p = b.map(|b| shift_index(a, p, b, b));
    let l_p = c_root.map(|c| shift_index(a, p, c, p - c));
    let k_p = j_p.map(|j| if j <= p - 2 { p - j - 2 } else { -1 });
    Ok(SqrtData {
        a,
        p,
        b,
        c_root,
        j_p,
        l_p,
        k_p,
    })
}

/// The four closed forms of `d_{a,p^2}` on `C1` (`F`, `G` lowercase) and `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `(b+tp)^2 + (b+(j-t)p)^2`, valid on `C1` for `t <= j`.
    LowerC1,
    /// `(b+tp)^2 + (b+(p+j-t)p)^2`, valid on `C1` for `t > j`.
    UpperC1,
    /// `(p-b+sp)^2 + (p-b+(k-s)p)^2`, valid on `C2` for `s <= k`.
    LowerC2,
    /// `(p-b+sp)^2 + (p-b+(p+k-s)p)^2`, valid on `C2` for `s > k`.
    UpperC2,
}

impl Branch {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "f" => Some(Self::LowerC1),
            "g" => Some(Self::UpperC1),
            "F" => Some(Self::LowerC2),
            "G" => Some(Self::UpperC2),
            _ => None,
        }
    }
}

pub fn branch_eval(which: Branch, arg: Int, ctx: &SqrtData) -> Result<Wide> {
    let (b, j, k) = match (ctx.b, ctx.j_p, ctx.k_p) {
        (Some(b), Some(j), Some(k)) => (b as Wide, j as Wide, k as Wide),
        _ => return Err(Error::MissingRoot),
    };
    let p = ctx.p as Wide;
    let t = arg as Wide;
    let sq = |v: Wide| v * v;
    Ok(match which {
        Branch::LowerC1 => sq(b + t * p) + sq(b + (j - t) * p),
        Branch::UpperC1 => sq(b + t * p) + sq(b + (p + j - t) * p),
        Branch::LowerC2 => sq(p - b + t * p) + sq(p - b + (k - t) * p),
        Branch::UpperC2 => sq(p - b + t * p) + sq(p - b + (p + k - t) * p),
    })
}

/// `d_{a,p^2}(b + tp)` through the matching closed form.
pub fn c1_distance(ctx: &SqrtData, t: Int) -> Result<Wide> {
    let j = ctx.j_p.ok_or(Error::MissingRoot)?;
    branch_eval(if t <= j { Branch::LowerC1 } else { Branch::UpperC1 }, t, ctx)
}

/// `d_{a,p^2}(p - b + sp)` through the matching closed form.
pub fn c2_distance(ctx: &SqrtData, s: Int) -> Result<Wide> {
    let k = ctx.k_p.ok_or(Error::MissingRoot)?;
    branch_eval(if s <= k { Branch::LowerC2 } else { Branch::UpperC2 }, s, ctx)
}

fn square_spec(a: Int, p: Int) -> Result<HyperbolaSpec> {
    HyperbolaSpec::new(a, p * p)
}

fn progression_values(spec: &HyperbolaSpec, start: Int, p: Int) -> Result<BTreeSet<Dist>> {
    (0..p).map(|t| distance_of(spec, start + t * p)).collect()
}

/// `#(d(C1) ∩ d(C2))` for an explicit root `b` of `a` modulo `p`.
pub fn intersection_for_root(a: Int, p: Int, b: Int) -> Result<usize> {
    let spec = square_spec(a, p)?;
    let c1 = progression_values(&spec, b, p)?;
    let c2 = progression_values(&spec, p - b, p)?;
    Ok(c1.intersection(&c2).count())
}

/// `#(d(C1) ∩ d(C2))` by evaluating `d_{a,p^2}` on both progressions.
pub fn intersection_direct(a: Int, p: Int) -> Result<usize> {
    let sd = sqrt_data(a, p)?;
    let b = sd.b.ok_or(Error::NoSquareRoot { a, p })?;
    intersection_for_root(a, p, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSolutionSet {
    /// `(t, s)` from the `f = G` factorisation.
    pub l1: Vec<(Int, Int)>,
    /// `(t, s)` from the `g = F` factorisation.
    pub l2: Vec<(Int, Int)>,
    /// Divisor pairs of `2b`, present only when `j_p = 0`.
    pub s: Option<Vec<(Int, Int)>>,
    /// Every lattice point maps to a common value of `d(C1)` and `d(C2)`.
    pub all_on_diagonal: bool,
}

impl LatticeSolutionSet {
    pub fn count(&self) -> usize {
        self.l1.len() + self.l2.len()
    }
}

/// Coincidences `d(b + tp) = d(p - b + sp)` as lattice points of
///
/// * `L1`: `(s+t+1-p)(s-t+1+j-p) = 2b + jp - p^2` on `[0, j/2] x [k+1, (p+k)/2]`,
/// * `L2`: `(s+t+1-p)(s-t+1+j) = 2b + jp` on `[j+1, (p+j)/2] x [0, k/2]`,
///
/// found by scanning both rectangles.
pub fn intersection_via_lattice(a: Int, p: Int) -> Result<LatticeSolutionSet> {
    let sd = sqrt_data(a, p)?;
    let (b, j, k) = match (sd.b, sd.j_p, sd.k_p) {
        (Some(b), Some(j), Some(k)) => (b, j, k),
        _ => return Err(Error::NoSquareRoot { a, p }),
    };
    let mut l1 = Vec::new();
    let rhs1 = 2 * b + j * p - p * p;
    for t in (0..p).take_while(|&t| 2 * t <= j) {
        for s in ((k + 1).max(0)..p).take_while(|&s| 2 * s <= p + k) {
            if (s + t + 1 - p) * (s - t + 1 + j - p) == rhs1 {
                l1.push((t, s));
            }
        }
    }
    let mut l2 = Vec::new();
    let rhs2 = 2 * b + j * p;
    for t in ((j + 1)..p).take_while(|&t| 2 * t <= p + j) {
        for s in (0..p).take_while(|&s| 2 * s <= k) {
            if (s + t + 1 - p) * (s - t + 1 + j) == rhs2 {
                l2.push((t, s));
            }
        }
    }
    let all_on_diagonal = l1.iter().chain(&l2).all(|&(t, s)| {
        matches!((c1_distance(&sd, t), c2_distance(&sd, s)), (Ok(x), Ok(y)) if x == y)
    });
    let s = if j == 0 { Some(divisor_pairs(b, p)) } else { None };
    Ok(LatticeSolutionSet {
        l1,
        l2,
        s,
        all_on_diagonal,
    })
}

/// `(m, n)` with `mn = 2b`, `-p+2 <= m < 0`, `-p/2+1 <= n < 0`, `m`, `n` of
/// opposite parity and `m <= n`.
fn divisor_pairs(b: Int, p: Int) -> Vec<(Int, Int)> {
    let two_b = 2 * b;
    divisors(two_b)
        .into_iter()
        .map(|d| (-d, -(two_b / d)))
        .filter(|&(m, n)| {
            m >= 2 - p && 2 * n >= 2 - p && (m - n).rem_euclid(2) == 1 && m <= n
        })
        .collect()
}

/// The divisor-pair set `S`, defined when `j_p = 0`.
pub fn set_s(a: Int, p: Int) -> Result<Vec<(Int, Int)>> {
    let sd = sqrt_data(a, p)?;
    let b = sd.b.ok_or(Error::NoSquareRoot { a, p })?;
    match sd.j_p {
        Some(0) => Ok(divisor_pairs(b, p)),
        Some(j) => Err(Error::NotApplicable(format!("j_p = {j} is nonzero"))),
        None => Err(Error::MissingRoot),
    }
}

/// `(phi(p^2) + 1 + (a/p))/2 - #(d(C1) ∩ d(C2))`, the intersection being
/// zero when `a` is a non-residue.
pub fn theorem14_eval(a: Int, p: Int) -> Result<Int> {
    require_odd_prime(p)?;
    if a.rem_euclid(p) == 0 {
        return Err(Error::NotCoprime { a, n: p });
    }
    let chi = legendre(a, p) as Int;
    let phi = p * (p - 1);
    let meet = if chi == 1 {
        intersection_direct(a, p)? as Int
    } else {
        0
    };
    Ok((phi + 1 + chi) / 2 - meet)
}

/// Which part of the image a distance value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImageClass {
    /// Generic values: preimages satisfy neither `x^2 = a` nor `x^2 = -a` mod `p`.
    A,
    /// Preimages satisfy `x^2 = a (mod p)`; value is `2a` mod `p`.
    B1,
    /// Preimages satisfy `x^2 = -a (mod p)`; value is `-2a` mod `p`.
    B2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BDecomposition {
    pub phi: Int,
    pub image_size: usize,
    pub a_size: usize,
    pub a_preimages: usize,
    pub b1_values: BTreeSet<Dist>,
    pub b2_values: BTreeSet<Dist>,
    pub b1_preimages: usize,
    pub b2_preimages: usize,
    pub max_fiber: usize,
    /// Every `A` value has exactly two preimages.
    pub a_fibers_are_pairs: bool,
    /// Preimages of each value share one class, and that class agrees with
    /// the residue of the value (`2a`, `-2a`, other) modulo `p`.
    pub consistent: bool,
    pub classification: BTreeMap<Dist, ImageClass>,
}

fn preimage_class(x: Int, a: Int, p: Int) -> ImageClass {
    let sq = (x % p) * (x % p) % p;
    if sq == a.rem_euclid(p) {
        ImageClass::B1
    } else if sq == (-a).rem_euclid(p) {
        ImageClass::B2
    } else {
        ImageClass::A
    }
}

fn value_class(u: Dist, a: Int, p: Int) -> ImageClass {
    let r = (u % p as Dist) as Int;
    if r == (2 * a).rem_euclid(p) {
        ImageClass::B1
    } else if r == (-2 * a).rem_euclid(p) {
        ImageClass::B2
    } else {
        ImageClass::A
    }
}

pub fn classify_image(a: Int, pp: PrimePower) -> Result<BDecomposition> {
    let p = pp.p();
    require_odd_prime(p)?;
    let spec = HyperbolaSpec::new(a, pp.n())?;
    let a = spec.a();
    let profile = distance_profile(spec);

    let mut classification = BTreeMap::new();
    let mut consistent = true;
    let mut a_fibers_are_pairs = true;
    let (mut a_size, mut a_pre) = (0, 0);
    let (mut b1_values, mut b2_values) = (BTreeSet::new(), BTreeSet::new());
    let (mut b1_pre, mut b2_pre) = (0, 0);
    let mut max_fiber = 0;
    for (&u, xs) in &profile.value_map {
        let class = preimage_class(xs[0], a, p);
        consistent &= xs.iter().all(|&x| preimage_class(x, a, p) == class);
        consistent &= value_class(u, a, p) == class;
        max_fiber = max_fiber.max(xs.len());
        match class {
            ImageClass::A => {
                a_size += 1;
                a_pre += xs.len();
                a_fibers_are_pairs &= xs.len() == 2;
            }
            ImageClass::B1 => {
                b1_values.insert(u);
                b1_pre += xs.len();
            }
            ImageClass::B2 => {
                b2_values.insert(u);
                b2_pre += xs.len();
            }
        }
        classification.insert(u, class);
    }
    Ok(BDecomposition {
        phi: pp.phi(),
        image_size: profile.distinct_count(),
        a_size,
        a_preimages: a_pre,
        b1_values,
        b2_values,
        b1_preimages: b1_pre,
        b2_preimages: b2_pre,
        max_fiber,
        a_fibers_are_pairs,
        consistent,
        classification,
    })
}

/// Checks of the intermediate statements behind the `p^2` count formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStepReport {
    pub a: Int,
    pub p: Int,
    /// Every generic value has exactly two preimages.
    pub generic_pairs: bool,
    /// `#A = (phi - #d^{-1}(B)) / 2`.
    pub generic_count: bool,
    /// `B1`, `B2` are disjoint and every value is classified consistently.
    pub b_split: bool,
    /// `d` is injective on `D1 = {c + tp}`, `d(D1) = d(D2)`, `#B2 = p` and
    /// the `l_p` closed forms match; `None` when `-a` is a non-residue.
    pub b2_structure: Option<bool>,
    /// `#d(C1) = #d(C2) = (p+1)/2`, `#d^{-1}(B1) = 2p`,
    /// `B1 = d(C1) ∪ d(C2)`, and the `j_p`, `k_p` closed forms match;
    /// `None` when `a` is a non-residue.
    pub b1_structure: Option<bool>,
    pub c1_image: Option<usize>,
    pub c2_image: Option<usize>,
}

impl ProofStepReport {
    pub fn pass(&self) -> bool {
        self.generic_pairs
            && self.generic_count
            && self.b_split
            && self.b2_structure.unwrap_or(true)
            && self.b1_structure.unwrap_or(true)
    }
}

pub fn proof_steps(a: Int, p: Int) -> Result<ProofStepReport> {
    let sd = sqrt_data(a, p)?;
    let pp = PrimePower::new(p, 2)?;
    let spec = HyperbolaSpec::new(a, pp.n())?;
    let dec = classify_image(a, pp)?;
    let generic_count = 2 * dec.a_size + dec.b1_preimages + dec.b2_preimages == pp.phi() as usize;
    let b_split = dec.consistent && dec.b1_values.is_disjoint(&dec.b2_values);

    let b2_structure = match (sd.c_root, sd.l_p) {
        (Some(c), Some(l)) => {
            let d1: Vec<Dist> = (0..p).map(|t| distance_of(&spec, c + t * p)).collect::<Result<_>>()?;
            let d1_set: BTreeSet<Dist> = d1.iter().copied().collect();
            let d2_set = progression_values(&spec, p - c, p)?;
            let forms = (0..p).all(|t| {
                let partner = if l + t < p { p - c + (l + t) * p } else { p - c + (l + t - p) * p };
                d1[t as usize] == squared_distance(c + t * p, partner)
            });
            Some(
                d1_set.len() == p as usize
                    && d1_set == d2_set
                    && dec.b2_values == d1_set
                    && dec.b2_preimages == 2 * p as usize
                    && forms,
            )
        }
        _ => None,
    };

    let (mut c1_image, mut c2_image) = (None, None);
    let b1_structure = match sd.b {
        Some(b) => {
            let c1 = progression_values(&spec, b, p)?;
            let c2 = progression_values(&spec, p - b, p)?;
            let forms = (0..p).all(|t| {
                let direct = distance_of(&spec, b + t * p).ok().map(Wide::from);
                let via = c1_distance(&sd, t).ok();
                direct.is_some() && direct == via
            }) && (0..p).all(|s| {
                let direct = distance_of(&spec, p - b + s * p).ok().map(Wide::from);
                direct.is_some() && direct == c2_distance(&sd, s).ok()
            });
            let union: BTreeSet<Dist> = c1.union(&c2).copied().collect();
            let expected = (p as usize - 1) / 2 + 1;
            c1_image = Some(c1.len());
            c2_image = Some(c2.len());
            Some(
                c1.len() == expected
                    && c2.len() == expected
                    && union == dec.b1_values
                    && dec.b1_preimages == 2 * p as usize
                    && forms,
            )
        }
        None => None,
    };

    Ok(ProofStepReport {
        a,
        p,
        generic_pairs: dec.a_fibers_are_pairs,
        generic_count,
        b_split,
        b2_structure,
        b1_structure,
        c1_image,
        c2_image,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPmReport {
    pub a: Int,
    pub p: Int,
    pub m: u32,
    pub phi: Int,
    pub image_size: usize,
    pub chi_a: i8,
    pub chi_minus_a: i8,
    pub b1_size: usize,
    pub b2_size: usize,
    pub b1_preimages: usize,
    pub b2_preimages: usize,
    pub max_fiber: usize,
    /// `4 p^floor(m/2)`.
    pub fiber_bound: usize,
    /// `p^(ceil(m/2)-1) / 2`.
    pub b_lower_bound: Rational,
    /// `#Image - phi/2`.
    pub excess: Rational,
    /// `sum_i (#B_i - (1 + chi_i) p^(m-1) / 2)`.
    pub correction_half: Rational,
    /// The same sum with denominator 4.
    pub correction_quarter: Rational,
    pub preimage_sizes_ok: bool,
    pub fiber_bound_ok: bool,
    pub b_lower_bound_ok: bool,
    /// `#Image = phi/2`; `None` unless both `a` and `-a` are non-residues.
    pub nonresidue_case_ok: Option<bool>,
    pub half_identity_holds: bool,
    pub quarter_identity_holds: bool,
}

impl GeneralPmReport {
    pub fn pass(&self) -> bool {
        self.preimage_sizes_ok
            && self.fiber_bound_ok
            && self.b_lower_bound_ok
            && self.nonresidue_case_ok.unwrap_or(true)
            && self.half_identity_holds
    }

    pub fn some_b_nonempty(&self) -> bool {
        self.b1_size > 0 || self.b2_size > 0
    }
}

pub fn general_pm_check(a: Int, pp: PrimePower) -> Result<GeneralPmReport> {
    let (p, m) = (pp.p(), pp.m());
    require_odd_prime(p)?;
    if m < 2 {
        return Err(Error::OutOfScope("needs m >= 2".into()));
    }
    let dec = classify_image(a, pp)?;
    let chi_a = legendre(a, p);
    let chi_minus_a = legendre(-a, p);
    let q = pp.p_pow(m - 1) as Wide;
    let phi = pp.phi() as Wide;
    let want = 2 * pp.p_pow(m - 1) as usize;
    let b_lower_bound = Rational::new(pp.p_pow(m.div_ceil(2) - 1) as Wide, 2);

    let sizes = [
        (dec.b1_values.len(), dec.b1_preimages, chi_a),
        (dec.b2_values.len(), dec.b2_preimages, chi_minus_a),
    ];
    let preimage_sizes_ok = sizes
        .iter()
        .all(|&(size, pre, chi)| (size == 0) == (chi != 1) && (size == 0 || pre == want));
    let b_lower_bound_ok = sizes
        .iter()
        .all(|&(size, _, _)| size == 0 || Rational::from_integer(size as Wide) >= b_lower_bound);
    let fiber_bound = 4 * pp.p_pow(m / 2) as usize;

    let excess = Rational::from_integer(dec.image_size as Wide) - Rational::new(phi, 2);
    let correction = |den: Wide| {
        sizes.iter().fold(Rational::from_integer(0), |acc, &(size, _, chi)| {
            acc + Rational::from_integer(size as Wide) - Rational::new((1 + chi as Wide) * q, den)
        })
    };
    let correction_half = correction(2);
    let correction_quarter = correction(4);

    Ok(GeneralPmReport {
        a: a.rem_euclid(pp.n()),
        p,
        m,
        phi: pp.phi(),
        image_size: dec.image_size,
        chi_a,
        chi_minus_a,
        b1_size: dec.b1_values.len(),
        b2_size: dec.b2_values.len(),
        b1_preimages: dec.b1_preimages,
        b2_preimages: dec.b2_preimages,
        max_fiber: dec.max_fiber,
        fiber_bound,
        b_lower_bound,
        excess,
        correction_half,
        correction_quarter,
        preimage_sizes_ok,
        fiber_bound_ok: dec.max_fiber <= fiber_bound,
        b_lower_bound_ok,
        nonresidue_case_ok: (chi_a == -1 && chi_minus_a == -1)
            .then(|| 2 * dec.image_size as Int == pp.phi()),
        half_identity_holds: excess == correction_half,
        quarter_identity_holds: excess == correction_quarter,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub k: u32,
    pub a: Int,
    pub p: Int,
    pub b: Int,
    pub s: Vec<(Int, Int)>,
    pub intersection: usize,
    /// `#F_{a,p^2}` from the count formula.
    pub distinct_count: Int,
    /// `phi(p^2)/2 - #F_{a,p^2}`.
    pub gap: Int,
    /// Brute-force `#F_{a,p^2}`, computed when `p^2` is small.
    pub brute_force_count: Option<Int>,
}

impl GapReport {
    pub fn pass(&self) -> bool {
        self.s.len() == 1usize << self.k
            && self.intersection == self.s.len()
            && self.gap == self.s.len() as Int - 1
            && self.brute_force_count.is_none_or(|c| c == self.distinct_count)
    }
}

/// Brute-force cross-check is skipped above this `p^2`.
pub const GAP_BRUTE_FORCE_LIMIT: Int = 1_000_000;

/// `a = (3 * 5 * ... * p_k)^2` over the first `k` odd primes, with `p` the
/// next prime above `a`.
pub fn gap_experiment(k: u32) -> Result<GapReport> {
    if k == 0 {
        return Err(Error::OutOfScope("k must be at least 1".into()));
    }
    let odd_primes: Vec<Int> = primes_up_to(200).into_iter().skip(1).take(k as usize).collect();
    let b = odd_primes
        .iter()
        .try_fold(1 as Int, |acc, &q| acc.checked_mul(q))
        .filter(|_| odd_primes.len() == k as usize)
        .ok_or_else(|| Error::InfeasibleScale(format!("k = {k}")))?;
    let a = b
        .checked_mul(b)
        .filter(|&a| a < MAX_MODULUS)
        .ok_or_else(|| Error::InfeasibleScale(format!("a = {b}^2 is too large")))?;
    let p = next_prime(a);
    if p.checked_mul(p).is_none_or(|n| n > MAX_MODULUS) {
        return Err(Error::InfeasibleScale(format!("p^2 = {p}^2 exceeds 2^31")));
    }
    let s = set_s(a, p)?;
    let intersection = intersection_direct(a, p)?;
    let distinct_count = theorem14_eval(a, p)?;
    let gap = p * (p - 1) / 2 - distinct_count;
    let brute_force_count = (p * p <= GAP_BRUTE_FORCE_LIMIT)
        .then(|| distinct_distance_count(HyperbolaSpec::new(a, p * p).expect("coprime")) as Int);
    Ok(GapReport {
        k,
        a,
        p,
        b,
        s,
        intersection,
        distinct_count,
        gap,
        brute_force_count,
    })
}
