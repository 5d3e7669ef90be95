//! Least-residue points of `xy = a (mod n)` and their classes modulo `p`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ntcore::{gcd, mod_inverse, mul_mod, PrimePower};
use crate::{Error, Int, Result, MAX_MODULUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[Int; 2]", from = "[Int; 2]")]
pub struct Point {
    pub x: Int,
    pub y: Int,
}

impl Point {
    pub const fn new(x: Int, y: Int) -> Self {
        Self { x, y }
    }

    pub fn swapped(self) -> Self {
        Self::new(self.y, self.x)
    }
}

impl From<Point> for [Int; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<[Int; 2]> for Point {
    fn from([x, y]: [Int; 2]) -> Self {
        Self::new(x, y)
    }
}

impl From<(Int, Int)> for Point {
    fn from((x, y): (Int, Int)) -> Self {
        Self::new(x, y)
    }
}

/// A validated pair `(a, n)` with `gcd(a, n) = 1`.
///
/// `a` is stored as its least residue modulo `n`; only the residue class
/// enters any computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperbolaSpec {
    a: Int,
    n: Int,
    prime_power: Option<PrimePower>,
}

impl HyperbolaSpec {
    pub fn new(a: Int, n: Int) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(Error::ModulusOutOfRange(n));
        }
        if gcd(a, n) != 1 {
            return Err(Error::NotCoprime { a, n });
        }
        Ok(Self {
            a: a.rem_euclid(n),
            n,
            prime_power: PrimePower::from_modulus(n),
        })
    }

    pub fn a(&self) -> Int {
        self.a
    }

    pub fn n(&self) -> Int {
        self.n
    }

    pub fn prime_power(&self) -> Option<PrimePower> {
        self.prime_power
    }

    /// The partner `a * x^{-1} mod n` of a unit `x`.
    pub fn partner(&self, x: Int) -> Result<Int> {
        Ok(mul_mod(self.a, mod_inverse(x, self.n)?, self.n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub spec: HyperbolaSpec,
    /// Sorted by `x`.
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.points).expect("points serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.x, p.y);
        }
        out
    }
}

pub fn enumerate_points(spec: HyperbolaSpec) -> PointSet {
    let n = spec.n();
    let points = (1..n)
        .filter_map(|x| spec.partner(x).ok().map(|y| Point::new(x, y)))
        .collect();
    PointSet { spec, points }
}

/// Points of `H_{a,p^m}` grouped by `x mod p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    pub p: Int,
    pub classes: BTreeMap<Int, Vec<Point>>,
}

impl ClassPartition {
    pub fn class_of(&self, pt: Point) -> Int {
        pt.x.rem_euclid(self.p)
    }
}

pub fn partition_classes(ps: &PointSet) -> Result<ClassPartition> {
    let pp = ps
        .spec
        .prime_power()
        .ok_or(Error::NotPrimePower(ps.spec.n()))?;
    let p = pp.p();
    let mut classes: BTreeMap<Int, Vec<Point>> = BTreeMap::new();
    for &pt in &ps.points {
        classes.entry(pt.x % p).or_default().push(pt);
    }
    Ok(ClassPartition { p, classes })
}

/// Mirror image in the diagonal `y = x`, re-sorted by `x`.
pub fn reflect_diagonal(ps: &PointSet) -> PointSet {
    let mut points: Vec<Point> = ps.points.iter().map(|p| p.swapped()).collect();
    points.sort_unstable();
    PointSet {
        spec: ps.spec,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(Int, Int)]) -> Vec<Point> {
        v.iter().map(|&t| t.into()).collect()
    }

    fn h(a: Int, n: Int) -> PointSet {
        enumerate_points(HyperbolaSpec::new(a, n).unwrap())
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(h(1, 5).points, pts(&[(1, 1), (2, 3), (3, 2), (4, 4)]));
        assert_eq!(h(1, 2).points, pts(&[(1, 1)]));
        assert_eq!(h(1, 8).points, pts(&[(1, 1), (3, 3), (5, 5), (7, 7)]));
    }

    #[test]
    fn spec_validation() {
        assert_eq!(HyperbolaSpec::new(2, 4), Err(Error::NotCoprime { a: 2, n: 4 }));
        assert_eq!(HyperbolaSpec::new(1, 1), Err(Error::ModulusOutOfRange(1)));
        let s = HyperbolaSpec::new(4, 3).unwrap();
        assert_eq!(s.a(), 1);
        assert_eq!(HyperbolaSpec::new(1, 12).unwrap().prime_power(), None);
    }

    #[test]
    fn partition_examples() {
        let c = partition_classes(&h(1, 9)).unwrap();
        assert_eq!(c.classes[&1], pts(&[(1, 1), (4, 7), (7, 4)]));
        assert_eq!(c.classes[&2], pts(&[(2, 5), (5, 2), (8, 8)]));

        let c = partition_classes(&h(1, 5)).unwrap();
        assert_eq!(c.classes.len(), 4);
        for (i, class) in &c.classes {
            assert_eq!(class.len(), 1);
            assert_eq!(class[0].x, *i);
        }

        let c = partition_classes(&h(1, 16)).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[&1].len(), 8);

        assert_eq!(partition_classes(&h(1, 12)), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn reflection() {
        let ps = h(1, 5);
        assert_eq!(reflect_diagonal(&ps), ps);
        let frag = PointSet {
            spec: ps.spec,
            points: pts(&[(2, 3)]),
        };
        assert_eq!(reflect_diagonal(&frag).points, pts(&[(3, 2)]));
        let ps = h(2, 7);
        assert_eq!(reflect_diagonal(&ps), ps);
    }

    #[test]
    fn serialization() {
        let ps = h(1, 5);
        assert_eq!(ps.to_json(), "[[1,1],[2,3],[3,2],[4,4]]");
        assert_eq!(ps.to_csv(), "x,y\n1,1\n2,3\n3,2\n4,4\n");
    }
}
