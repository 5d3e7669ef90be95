//! Modular arithmetic and quadratic congruences modulo odd prime powers.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Int, Result, Wide, MAX_MODULUS};

/// Below this bound `sqrt_mod_prime` finds roots by exhaustion.
pub const EXHAUSTIVE_SQRT_LIMIT: Int = 1000;

#[inline]
pub fn mul_mod(x: Int, y: Int, n: Int) -> Int {
    ((x as Wide * y as Wide).rem_euclid(n as Wide)) as Int
}

pub fn pow_mod(base: Int, mut exp: u64, n: Int) -> Int {
    let mut acc = 1 % n;
    let mut b = base.rem_euclid(n);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    acc
}

pub fn gcd(x: Int, y: Int) -> Int {
    x.gcd(&y)
}

/// Inverse of `x` modulo `n`, in `[1, n)` (or `0` when `n == 1`).
pub fn mod_inverse(x: Int, n: Int) -> Result<Int> {
    let r = x.rem_euclid(n);
    let e = r.extended_gcd(&n);
    if e.gcd != 1 {
        return Err(Error::NotInvertible { x, n });
    }
    Ok(e.x.rem_euclid(n))
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: Int) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d: Int = 5;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: Int) -> Int {
    let mut c = n.max(1) + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Primes in `[2, limit]`, ascending.
pub fn primes_up_to(limit: Int) -> Vec<Int> {
    if limit < 2 {
        return Vec::new();
    }
    let lim = limit as usize;
    let mut composite = vec![false; lim + 1];
    let mut out = Vec::new();
    for i in 2..=lim {
        if !composite[i] {
            out.push(i as Int);
            let mut j = i * i;
            while j <= lim {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: Int) -> Vec<(Int, u32)> {
    let mut out = Vec::new();
    let mut d: Int = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: Int) -> Int {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Positive divisors of `n > 0`, ascending.
pub fn divisors(n: Int) -> Vec<Int> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: Int = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A prime power `p^m` with `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    p: Int,
    m: u32,
    n: Int,
    phi: Int,
}

impl PrimePower {
    pub fn new(p: Int, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroExponent);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = p
            .checked_pow(m)
            .filter(|&n| n <= MAX_MODULUS)
            .ok_or(Error::ModulusOutOfRange(p.saturating_pow(m)))?;
        let phi = n / p * (p - 1);
        Ok(Self { p, m, n, phi })
    }

    /// Decomposes `n` as `p^m` if it is a prime power.
    pub fn from_modulus(n: Int) -> Option<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return None;
        }
        match factorize(n).as_slice() {
            &[(p, m)] => Self::new(p, m).ok(),
            _ => None,
        }
    }

    pub fn p(&self) -> Int {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> Int {
        self.n
    }

    pub fn phi(&self) -> Int {
        self.phi
    }

    /// `p^k` for `k <= m`.
    pub fn p_pow(&self, k: u32) -> Int {
        self.p.pow(k)
    }
}

/// All prime powers `p^m` in `[lo, hi]` ordered by value.
pub fn prime_powers_in(lo: Int, hi: Int) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for p in primes_up_to(hi) {
        let mut m = 1;
        let mut n = p;
        while n <= hi {
            if n >= lo {
                out.push(PrimePower::new(p, m).expect("prime power in range"));
            }
            m += 1;
            n *= p;
        }
    }
    out.sort_by_key(|pp| pp.n());
    out
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: Int, p: Int) -> i8 {
    let r = a.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    match pow_mod(r, ((p - 1) / 2) as u64, p) {
        1 => 1,
        _ => -1,
    }
}

fn ordered_pair(r: Int, p: Int) -> (Int, Int) {
    let s = p - r;
    (r.min(s), r.max(s))
}

/// Square roots of `a` modulo an odd prime `p`, smaller root first.
pub fn sqrt_mod_prime(a: Int, p: Int) -> Result<(Int, Int)> {
    if p < EXHAUSTIVE_SQRT_LIMIT {
        sqrt_mod_prime_exhaustive(a, p)
    } else {
        tonelli_shanks(a, p)
    }
}

pub fn sqrt_mod_prime_exhaustive(a: Int, p: Int) -> Result<(Int, Int)> {
    let r = a.rem_euclid(p);
    (1..=p / 2)
        .find(|&x| x * x % p == r)
        .map(|x| ordered_pair(x, p))
        .ok_or(Error::NotAResidue { a, p })
}

pub fn tonelli_shanks(a: Int, p: Int) -> Result<(Int, Int)> {
    if legendre(a, p) != 1 {
        return Err(Error::NotAResidue { a, p });
    }
    let a = a.rem_euclid(p);
    if p % 4 == 3 {
        let r = pow_mod(a, ((p + 1) / 4) as u64, p);
        return Ok(ordered_pair(r, p));
    }
    let mut q = (p - 1) as u64;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1).expect("odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Ok(ordered_pair(r, p))
}

/// Lifts a root `b` of `z^2 = d (mod p)` to the unique root modulo `p^m`
/// congruent to `b` modulo `p`.
pub fn hensel_lift_sqrt(b: Int, d: Int, pp: PrimePower) -> Result<Int> {
    let p = pp.p();
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if d.rem_euclid(p) == 0 {
        return Err(Error::NotInvertible { x: d, n: p });
    }
    if (b as Wide * b as Wide - d as Wide).rem_euclid(p as Wide) != 0 {
        return Err(Error::NotAResidue { a: d, p });
    }
    let n = pp.n();
    let d = d.rem_euclid(n);
    let mut z = b.rem_euclid(p);
    // Newton steps double the p-adic precision each round.
    let mut precision = 1u32;
    while precision < pp.m() {
        let err = (mul_mod(z, z, n) - d).rem_euclid(n);
        let inv = mod_inverse(2 * z, n)?;
        z = (z - mul_mod(err, inv, n)).rem_euclid(n);
        precision *= 2;
    }
    debug_assert_eq!(mul_mod(z, z, n), d);
    Ok(z)
}

/// Largest `i` with `p^i | x`.
pub fn padic_valuation(x: Int, p: Int) -> Result<u32> {
    if x == 0 {
        return Err(Error::ZeroInput);
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Ok(v)
}

/// Shape of the discriminant of a quadratic congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `p` does not divide the discriminant, which is a square: two roots.
    UnitDiscriminant,
    /// Discriminant vanishes modulo `p^m`: `p^floor(m/2)` roots.
    ZeroDiscriminant,
    /// Exact valuation `i` (even, `0 < i < m`) with square unit part: `2 p^(i/2)` roots.
    EvenValuation(u32),
    /// Non-square unit part or odd valuation: no roots.
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSolutionSet {
    pub solutions: Vec<Int>,
    pub case_tag: CaseTag,
    /// `C^2 - 4AB` reduced into `[0, p^m)`.
    pub discriminant: Int,
    /// p-adic valuation of the discriminant, `m` when it vanishes mod `p^m`.
    pub valuation: u32,
}

/// Roots of `z^2 = d (mod p^m)` for an odd prime power, unsorted.
fn sqrt_mod_prime_power(d: Int, pp: PrimePower) -> (Vec<Int>, CaseTag, u32) {
    let (p, m, n) = (pp.p(), pp.m(), pp.n());
    let d = d.rem_euclid(n);
    if d == 0 {
        let step = pp.p_pow(m.div_ceil(2));
        let roots = (0..pp.p_pow(m / 2)).map(|k| k * step).collect();
        return (roots, CaseTag::ZeroDiscriminant, m);
    }
    let v = padic_valuation(d, p).expect("nonzero");
    let unit = d / pp.p_pow(v);
    if v % 2 == 1 || legendre(unit, p) != 1 {
        return (Vec::new(), CaseTag::Unsolvable, v);
    }
    let (r1, r2) = sqrt_mod_prime(unit, p).expect("residue");
    let reduced = PrimePower::new(p, m - v).expect("m - v >= 1");
    let k1 = hensel_lift_sqrt(r1, unit, reduced).expect("liftable");
    let k2 = hensel_lift_sqrt(r2, unit, reduced).expect("liftable");
    if v == 0 {
        return (vec![k1, k2], CaseTag::UnitDiscriminant, 0);
    }
    let half = pp.p_pow(v / 2);
    let stride = reduced.n();
    let mut roots = Vec::with_capacity(2 * half as usize);
    for k in [k1, k2] {
        for l in 0..half {
            roots.push((k + l * stride) * half);
        }
    }
    (roots, CaseTag::EvenValuation(v), v)
}

/// Solves `A x^2 + C x + B = 0 (mod p^m)` for odd `p` with `p` not dividing `A`.
///
/// The substitution `z = 2Ax + C` turns the congruence into `z^2 = D` with
/// `D = C^2 - 4AB`; the three shapes of `D` (unit, zero, partial power of
/// `p`) give the case tag.
pub fn solve_quadratic_congruence(
    a: Int,
    c: Int,
    b: Int,
    pp: PrimePower,
) -> Result<CongruenceSolutionSet> {
    let (p, n) = (pp.p(), pp.n());
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if a.rem_euclid(p) == 0 {
        return Err(Error::BadLeadingCoefficient { a, p });
    }
    let disc = (c as Wide * c as Wide - 4 * a as Wide * b as Wide).rem_euclid(n as Wide) as Int;
    let (zs, case_tag, valuation) = sqrt_mod_prime_power(disc, pp);
    let inv = mod_inverse(2 * a, n)?;
    let mut solutions: Vec<Int> = zs
        .into_iter()
        .map(|z| mul_mod(z - c, inv, n))
        .collect();
    solutions.sort_unstable();
    solutions.dedup();
    Ok(CongruenceSolutionSet {
        solutions,
        case_tag,
        discriminant: disc,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: Int, m: u32) -> PrimePower {
        PrimePower::new(p, m).unwrap()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(2, 5), Ok(3));
        assert_eq!(mod_inverse(1, 9), Ok(1));
        assert_eq!(mod_inverse(6, 9), Err(Error::NotInvertible { x: 6, n: 9 }));
        assert_eq!(mod_inverse(-1, 7), Ok(6));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(4, 7), 1);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(3, 5), -1);
        assert_eq!(legendre(14, 7), 0);
        assert_eq!(legendre(-1, 5), 1);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_prime(4, 5), Ok((2, 3)));
        assert_eq!(sqrt_mod_prime(2, 7), Ok((3, 4)));
        assert_eq!(sqrt_mod_prime(3, 5), Err(Error::NotAResidue { a: 3, p: 5 }));
        assert!(tonelli_shanks(3, 5).is_err());
        assert_eq!(tonelli_shanks(2, 7), Ok((3, 4)));
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_lift_sqrt(1, 1, pp(5, 2)), Ok(1));
        assert_eq!(hensel_lift_sqrt(3, 2, pp(7, 2)), Ok(10));
        assert_eq!(hensel_lift_sqrt(2, 4, pp(5, 3)), Ok(2));
        assert_eq!(hensel_lift_sqrt(1, 1, pp(2, 3)), Err(Error::EvenPrime));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(18, 3), Ok(2));
        assert_eq!(padic_valuation(5, 3), Ok(0));
        assert_eq!(padic_valuation(0, 3), Err(Error::ZeroInput));
        assert_eq!(padic_valuation(-27, 3), Ok(3));
    }

    #[test]
    fn quadratic_examples() {
        let s = solve_quadratic_congruence(1, -2, 1, pp(3, 2)).unwrap();
        assert_eq!(s.solutions, vec![1, 4, 7]);
        assert_eq!(s.case_tag, CaseTag::ZeroDiscriminant);

        let s = solve_quadratic_congruence(1, 0, -1, pp(5, 2)).unwrap();
        assert_eq!(s.solutions, vec![1, 24]);
        assert_eq!(s.case_tag, CaseTag::UnitDiscriminant);

        let s = solve_quadratic_congruence(1, 0, -9, pp(3, 3)).unwrap();
        assert_eq!(s.solutions, vec![3, 6, 12, 15, 21, 24]);
        assert_eq!(s.case_tag, CaseTag::EvenValuation(2));
        assert_eq!(s.valuation, 2);
    }

    #[test]
    fn quadratic_degenerate_and_errors() {
        // m = 1 with D = 0: single root -C/(2A).
        let s = solve_quadratic_congruence(1, -2, 1, pp(5, 1)).unwrap();
        assert_eq!(s.solutions, vec![1]);
        assert_eq!(s.case_tag, CaseTag::ZeroDiscriminant);

        assert_eq!(
            solve_quadratic_congruence(3, 1, 1, pp(3, 2)),
            Err(Error::BadLeadingCoefficient { a: 3, p: 3 })
        );
        // x^2 = 3 (mod 9): valuation 1 is odd.
        let s = solve_quadratic_congruence(1, 0, -3, pp(3, 2)).unwrap();
        assert!(s.solutions.is_empty());
        assert_eq!(s.case_tag, CaseTag::Unsolvable);
    }

    #[test]
    fn prime_power_construction() {
        let q = pp(7, 2);
        assert_eq!((q.n(), q.phi()), (49, 42));
        assert_eq!(PrimePower::new(9, 2), Err(Error::NotPrime(9)));
        assert_eq!(PrimePower::new(3, 0), Err(Error::ZeroExponent));
        assert!(PrimePower::new(2, 32).is_err());
        assert_eq!(PrimePower::from_modulus(27), Some(pp(3, 3)));
        assert_eq!(PrimePower::from_modulus(12), None);
        assert_eq!(PrimePower::from_modulus(1 << 31), Some(pp(2, 31)));
    }

    #[test]
    fn helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(next_prime(9), 11);
        assert_eq!(next_prime(225), 227);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        let ns: Vec<Int> = prime_powers_in(2, 16).iter().map(|q| q.n()).collect();
        assert_eq!(ns, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }
}
