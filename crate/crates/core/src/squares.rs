//! `D(k) = 2^(k+1) k^k - (k+1)^(k+1)` is never a perfect square: direct scan
//! plus the residue-class certificates for `k = 0, 3 (mod 4)`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// `2^(k+1) k^k - (k+1)^(k+1)`.
pub fn discriminant(k: u64) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let kb = BigInt::from(k);
    let left = (BigInt::one() << (k + 1)) * num_traits::pow(kb.clone(), k as usize);
    Ok(left - num_traits::pow(kb + 1, k as usize + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareTest {
    pub is_square: bool,
    /// `floor(sqrt(n))`; absent for negative input.
    #[serde(serialize_with = "opt_big")]
    pub floor: Option<BigInt>,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => crate::json::big(b, s),
        None => s.serialize_none(),
    }
}

pub fn is_perfect_square(n: &BigInt) -> SquareTest {
    if n.is_negative() {
        return SquareTest {
            is_square: false,
            floor: None,
        };
    }
    let r = n.sqrt();
    SquareTest {
        is_square: &r * &r == *n,
        floor: Some(r),
    }
}

const FILTER_MODULI: [u32; 4] = [64, 63, 65, 11];
const FILTER_PRODUCT: u32 = 64 * 63 * 65 * 11;

fn residue_tables() -> &'static [Vec<bool>; 4] {
    static TABLES: OnceLock<[Vec<bool>; 4]> = OnceLock::new();
    TABLES.get_or_init(|| {
        FILTER_MODULI.map(|m| {
            let mut t = vec![false; m as usize];
            for x in 0..m {
                t[((x * x) % m) as usize] = true;
            }
            t
        })
    })
}

/// Exact square root if `n` is a perfect square. Rejects most non-squares by
/// quadratic residues mod 64, 63, 65 and 11 before taking the integer root.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = (n % FILTER_PRODUCT).to_u32().unwrap();
    let tables = residue_tables();
    if FILTER_MODULI
        .iter()
        .zip(tables.iter())
        .any(|(&m, t)| !t[(r % m) as usize])
    {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Residue-class certificate that `D(k)` is not a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum ResidueWitness {
    /// `k = 0 (mod 4)`: `D(k) = 3 (mod 4)`.
    #[serde(rename = "k=0 mod 4")]
    ZeroMod4 { d_mod_4: u32 },
    /// `k = 3 (mod 4)`: `D(k) = 2^(k+1) * reduced` with
    /// `reduced = k^k - ((k+1)/2)^(k+1)`; a square `w1^2 = reduced` would write
    /// `k^k` as a sum of the coprime squares `w1^2` and `((k+1)/2)^(k+1)`,
    /// impossible since the prime `p = 3 (mod 4)` divides `k`.
    #[serde(rename = "k=3 mod 4")]
    ThreeMod4 {
        #[serde(serialize_with = "crate::json::big")]
        reduced: BigInt,
        half: u64,
        gcd: u64,
        prime: u64,
    },
    /// `k = 1, 2 (mod 4)`: covered by earlier published work and by the scan.
    #[serde(rename = "external")]
    External { k_mod_4: u32 },
}

impl ResidueWitness {
    pub fn tag(&self) -> &'static str {
        match self {
            ResidueWitness::ZeroMod4 { .. } => "k=0 mod 4",
            ResidueWitness::ThreeMod4 { .. } => "k=3 mod 4",
            ResidueWitness::External { .. } => "external",
        }
    }
}

fn smallest_prime_factor_3_mod_4(mut k: u64) -> Option<u64> {
    let mut p = 2;
    let mut found = None;
    while p * p <= k {
        while k.is_multiple_of(p) {
            if p % 4 == 3 {
                found = Some(found.map_or(p, |f: u64| f.min(p)));
            }
            k /= p;
        }
        p += 1;
    }
    if k > 1 && k % 4 == 3 {
        found = Some(found.map_or(k, |f| f.min(k)));
    }
    found
}

pub fn residue_witness(k: u64) -> Result<ResidueWitness> {
    let d = discriminant(k)?;
    Ok(match k % 4 {
        0 => ResidueWitness::ZeroMod4 {
            d_mod_4: d.mod_floor(&BigInt::from(4)).to_u32().unwrap(),
        },
        3 => {
            let half = k.div_ceil(2);
            let reduced = num_traits::pow(BigInt::from(k), k as usize)
                - num_traits::pow(BigInt::from(half), k as usize + 1);
            debug_assert_eq!(&reduced << (k + 1), d);
            let prime = smallest_prime_factor_3_mod_4(k)
                .expect("k = 3 (mod 4) has a prime factor = 3 (mod 4)");
            ResidueWitness::ThreeMod4 {
                reduced,
                half,
                gcd: k.gcd(&half),
                prime,
            }
        }
        r => ResidueWitness::External { k_mod_4: r as u32 },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareScanRecord {
    pub k: u64,
    #[serde(rename = "D", serialize_with = "crate::json::big")]
    pub d: BigInt,
    #[serde(serialize_with = "crate::json::big")]
    pub isqrt_floor: BigInt,
    pub is_square: bool,
    pub witness: ResidueWitness,
}

impl SquareScanRecord {
    /// The record's own claims hold: floor bracket, square flag, witness.
    pub fn consistent(&self) -> bool {
        let f = &self.isqrt_floor;
        let next = f + 1u32;
        let bracket = f * f <= self.d && self.d < &next * &next;
        let flag = self.is_square == (f * f == self.d);
        let witness = match &self.witness {
            ResidueWitness::ZeroMod4 { d_mod_4 } => *d_mod_4 == 3,
            ResidueWitness::ThreeMod4 {
                reduced,
                half,
                gcd,
                prime,
            } => {
                (reduced << (self.k + 1)) == self.d
                    && *gcd == 1
                    && prime % 4 == 3
                    && self.k.is_multiple_of(*prime)
                    && *half * 2 == self.k + 1
            }
            ResidueWitness::External { .. } => true,
        };
        bracket && flag && witness
    }
}

pub fn scan_record(k: u64) -> Result<SquareScanRecord> {
    let d = discriminant(k)?;
    let t = is_perfect_square(&d);
    let floor = t
        .floor
        .ok_or_else(|| Error::invalid(format!("D({k}) is negative")))?;
    Ok(SquareScanRecord {
        k,
        d,
        isqrt_floor: floor,
        is_square: t.is_square,
        witness: residue_witness(k)?,
    })
}

/// Records for every `k` in `2..=k_max`.
pub fn scan(k_max: u64) -> Result<Vec<SquareScanRecord>> {
    if k_max < 2 {
        return Err(Error::invalid("k_max must be at least 2"));
    }
    (2..=k_max).into_par_iter().map(scan_record).collect()
}
