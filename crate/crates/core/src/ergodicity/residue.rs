use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::instance::SphereInstance;
use crate::error::{Error, Result};
use crate::padic::{mod_inverse, PadicRational, RegionKind, UltrametricRegion};

/// The sphere `S_rho(x2)` seen modulo `p^k`, with the map induced by `f`.
///
/// For `|b| < 1` the denominator `b x + 1` is a unit on `Z_p`, so `f(x) mod p^k`
/// depends only on `x mod p^k` and the transition is well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueModel {
    p: u32,
    k: u32,
    m: i64,
    modulus: BigInt,
    b: BigInt,
    x2: BigInt,
    residues: Vec<BigInt>,
}

impl ResidueModel {
    pub fn new(inst: &SphereInstance, k: u32) -> Result<Self> {
        if (k as i64) <= inst.m() {
            return Err(Error::Precondition(format!(
                "residue exponent {k} cannot resolve a sphere of exponent {}",
                inst.m()
            )));
        }
        let ctx = inst.ctx();
        let modulus = ctx.p_pow(k);
        let x2 = inst.x2().residue(k)?;
        let b = inst.b().residue(k)?;
        let step = ctx.p_pow(inst.m() as u32);
        let p = BigInt::from(ctx.p());
        let count = ctx.p_pow(k - inst.m() as u32);
        let mut residues = Vec::new();
        let mut t = BigInt::one();
        while t < count {
            if !t.is_multiple_of(&p) {
                residues.push((&x2 + &t * &step).mod_floor(&modulus));
            }
            t += 1;
        }
        residues.sort();
        let model = Self {
            p: ctx.p(),
            k,
            m: inst.m(),
            modulus,
            b,
            x2,
            residues,
        };
        for r in &model.residues {
            model.transition(r)?;
        }
        Ok(model)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Residues of the sphere, sorted.
    pub fn residues(&self) -> &[BigInt] {
        &self.residues
    }

    /// `r^2 (b r + 1)^-1 mod p^k`.
    pub fn transition(&self, r: &BigInt) -> Result<BigInt> {
        let den = (&self.b * r + 1u32).mod_floor(&self.modulus);
        let inv = mod_inverse(&den, &self.modulus).ok_or_else(|| {
            Error::ResidueModelInvalid(format!("b*{r} + 1 is not a unit mod p^{}", self.k))
        })?;
        Ok((r * r * inv).mod_floor(&self.modulus))
    }

    /// Valuation of `r` read mod `p^k`, capped at `k`.
    pub fn valuation_mod(&self, r: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut r = r.mod_floor(&self.modulus);
        if r.is_zero() {
            return self.k as i64;
        }
        let mut v = 0;
        while r.is_multiple_of(&p) {
            r /= &p;
            v += 1;
        }
        v
    }

    pub fn on_sphere(&self, r: &BigInt) -> bool {
        self.valuation_mod(&(r - &self.x2)) == self.m
    }

    pub fn residue_of(&self, x: &PadicRational) -> Result<BigInt> {
        x.residue(self.k)
    }

    /// Membership of a residue class in a ball, decided at this resolution.
    pub fn in_region(&self, region: &UltrametricRegion, r: &BigInt) -> Result<bool> {
        let need = region.resolution_exponent();
        if need > self.k as i64 || region.kind == RegionKind::Sphere {
            return Err(Error::Precondition(format!(
                "{region} is not resolved by residues mod p^{}",
                self.k
            )));
        }
        let c = self.residue_of(&region.center)?;
        Ok(self.valuation_mod(&(r - c)) >= need)
    }

    pub fn residues_in(&self, region: &UltrametricRegion) -> Result<BTreeSet<BigInt>> {
        let mut out = BTreeSet::new();
        for r in &self.residues {
            if self.in_region(region, r)? {
                out.insert(r.clone());
            }
        }
        Ok(out)
    }

    /// Cycles of the transition on the sphere residues, each listed from its
    /// smallest element. The transition is a bijection here since `f` is an
    /// isometry of the sphere.
    pub fn cycles(&self) -> Result<Vec<Vec<BigInt>>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.residues {
            if seen.contains(r) {
                continue;
            }
            let mut cycle = vec![r.clone()];
            seen.insert(r.clone());
            let mut x = self.transition(r)?;
            while !seen.contains(&x) {
                seen.insert(x.clone());
                cycle.push(x.clone());
                x = self.transition(&x)?;
            }
            if &x != r {
                return Err(Error::ResidueModelInvalid(format!(
                    "transition is not a permutation: {x} is reached twice"
                )));
            }
            out.push(cycle);
        }
        Ok(out)
    }

    /// Points whose exact image disagrees with the transition of their residue.
    pub fn soundness_mismatches(
        &self,
        inst: &SphereInstance,
        points: &[PadicRational],
    ) -> Result<Vec<PadicRational>> {
        let mut bad = Vec::new();
        for x in points {
            let image = crate::dynamics::apply(inst.map(), x)?;
            if self.residue_of(&image)? != self.transition(&self.residue_of(x)?)? {
                bad.push(x.clone());
            }
        }
        Ok(bad)
    }
}
