//! Published point sets bundled with the library, each with the problem it
//! is an extremal example for.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::verify_points;
use crate::error::{Error, Result};
use crate::geometry::VerificationReport;
use crate::io::PointFile;
use crate::spec::ProblemSpec;

/// Extra condition on the hexagon census (interior count -> number).
#[derive(Clone, Copy, Debug)]
pub enum CensusCheck {
    Any,
    /// Every hexagon has one of these interior counts.
    Within(&'static [usize]),
    /// The census equals this list exactly.
    Exactly(&'static [(usize, usize)]),
}

impl CensusCheck {
    pub fn holds(&self, census: &BTreeMap<usize, usize>) -> bool {
        match self {
            CensusCheck::Any => true,
            CensusCheck::Within(ok) => census.keys().all(|k| ok.contains(k)),
            CensusCheck::Exactly(want) => census.iter().map(|(&k, &v)| (k, v)).eq(want.iter().copied()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub json: &'static str,
    /// Spec parameters without `n`.
    pub params: &'static str,
    pub census: CensusCheck,
}

macro_rules! data {
    ($f:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $f, ".json"))
    };
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "hex-avoid-01-17", json: data!("hex-avoid-01-17"), params: "hex=1", census: CensusCheck::Any },
    Fixture {
        name: "hex-unique0-17",
        json: data!("hex-unique0-17"),
        params: "hexex=1,2,3,4,5,6,7,8,9,10,11",
        census: CensusCheck::Exactly(&[(0, 1)]),
    },
    Fixture {
        name: "hex-unique1-17",
        json: data!("hex-unique1-17"),
        params: "hexex=0,2,3,4,5,6,7,8,9,10,11",
        census: CensusCheck::Exactly(&[(1, 1)]),
    },
    Fixture {
        name: "hex-only-12-18",
        json: data!("hex-only-12-18"),
        params: "hexex=0,3,4,5,6,7,8,9,10,11,12",
        census: CensusCheck::Within(&[1, 2]),
    },
    Fixture {
        name: "hex-only-123-19",
        json: data!("hex-only-123-19"),
        params: "hexex=0,4,5,6,7,8,9,10,11,12,13",
        census: CensusCheck::Within(&[1, 2, 3]),
    },
    Fixture {
        name: "hex-only-1234-20",
        json: data!("hex-only-1234-20"),
        params: "hexex=0,5,6,7,8,9,10,11,12,13,14",
        census: CensusCheck::Within(&[1, 2, 3, 4]),
    },
    Fixture { name: "hexsub-3-19", json: data!("hexsub-3-19"), params: "hexsub=3", census: CensusCheck::Any },
    Fixture { name: "hexsub-4-20", json: data!("hexsub-4-20"), params: "hexsub=4", census: CensusCheck::Any },
    Fixture { name: "nc-40-40-25", json: data!("nc-40-40-25"), params: "nc1=0 nc2=0", census: CensusCheck::Any },
    Fixture {
        name: "cv40-tr30-25-sym3",
        json: data!("cv40-tr30-25-sym3"),
        params: "cv1=0 tr2=0",
        census: CensusCheck::Any,
    },
    Fixture {
        name: "rec-33-20-sym5",
        json: data!("rec-33-20-sym5"),
        params: "etr1=0 etr2=0",
        census: CensusCheck::Any,
    },
    Fixture { name: "rc-34-10", json: data!("rc-34-10"), params: "etr1=inf ecv2=inf", census: CensusCheck::Any },
    Fixture { name: "rc-44-22", json: data!("rc-44-22"), params: "ecv1=inf ecv2=inf", census: CensusCheck::Any },
    Fixture { name: "rc-35-24", json: data!("rc-35-24"), params: "etr1=inf epent2=inf", census: CensusCheck::Any },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn load(&self) -> Result<PointFile> {
        PointFile::parse(self.json)
    }

    pub fn spec(&self) -> Result<ProblemSpec> {
        let n = self.load()?.points.len();
        let mut args = vec![format!("n={n}")];
        args.extend(self.params.split_whitespace().map(str::to_string));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (spec, rest) = ProblemSpec::parse_params(&refs)?;
        if let Some((k, _)) = rest.first() {
            return Err(Error::Parse(format!("unknown parameter '{k}' in fixture {}", self.name)));
        }
        Ok(spec)
    }

    /// Verify the set and its census condition.
    pub fn check(&self) -> Result<(VerificationReport, bool)> {
        let report = verify_points(&self.load()?, &self.spec()?)?;
        let census_ok = report.census.as_ref().is_some_and(|c| self.census.holds(c));
        Ok((report, census_ok))
    }
}

/// Rational ordinates of a 13-point two-colored configuration on the
/// abscissae 0..12, as printed by a combined logic/linear solver.
pub const LPX_13_ORDINATES: [(i64, i64); 13] = [
    (4719, 224),
    (11, 1),
    (7801, 448),
    (-323, 112),
    (-10833, 448),
    (-10411, 224),
    (4143, 224),
    (-3489, 112),
    (-1231, 32),
    (4591, 896),
    (1, 1),
    (0, 1),
    (0, 1),
];

pub fn lpx_13_ordinates() -> Vec<BigRational> {
    LPX_13_ORDINATES.iter().map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_with_its_spec() {
        for f in FIXTURES {
            let spec = f.spec().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            assert_eq!(spec.n, f.load().unwrap().points.len());
        }
    }

    #[test]
    fn census_checks() {
        let c: BTreeMap<usize, usize> = [(1, 3), (2, 5)].into_iter().collect();
        assert!(CensusCheck::Within(&[1, 2]).holds(&c));
        assert!(!CensusCheck::Within(&[1]).holds(&c));
        assert!(CensusCheck::Exactly(&[(1, 3), (2, 5)]).holds(&c));
        assert!(!CensusCheck::Exactly(&[(1, 3)]).holds(&c));
    }
}
