use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rational::{p_power, PadicRational};
use super::region::{RegionKind, UltrametricRegion};
use crate::error::{Error, Result};

/// Deterministic generator used for every randomized routine.
pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer `Σ d_j p^j` with `digits` base-`p` digits drawn independently.
/// With `unit` the lowest digit is drawn from `1..p`.
pub fn random_digits<R: Rng + ?Sized>(rng: &mut R, p: u32, digits: u32, unit: bool) -> BigInt {
    let p_big = BigInt::from(p);
    let mut acc = BigInt::from(0);
    let mut scale = BigInt::from(1);
    for j in 0..digits {
        let d = if j == 0 && unit {
            rng.gen_range(1..p)
        } else {
            rng.gen_range(0..p)
        };
        acc += &scale * BigInt::from(d);
        scale *= &p_big;
    }
    acc
}

/// `c + p^m u` with `u` a uniformly drawn unit below `p^N`.
pub fn sample_sphere_with<R: Rng + ?Sized>(
    sphere: &UltrametricRegion,
    rng: &mut R,
) -> Result<PadicRational> {
    if sphere.kind != RegionKind::Sphere {
        return Err(Error::InvalidRegion(format!("{sphere} is not a sphere")));
    }
    let ctx = sphere.center.ctx();
    let u = random_digits(rng, ctx.p(), ctx.precision(), true);
    Ok(offset(sphere, u, sphere.exponent))
}

pub fn sample_sphere(sphere: &UltrametricRegion, seed: u64) -> Result<PadicRational> {
    sample_sphere_with(sphere, &mut rng_from_seed(seed))
}

/// A point of an open or closed ball, `c + p^e w` with `w` uniform below
/// `p^N`. Spheres are sampled as in [`sample_sphere_with`].
pub fn sample_region_with<R: Rng + ?Sized>(
    region: &UltrametricRegion,
    rng: &mut R,
) -> PadicRational {
    let ctx = region.center.ctx();
    match region.kind {
        RegionKind::Sphere => sample_sphere_with(region, rng).expect("sphere"),
        RegionKind::ClosedBall | RegionKind::OpenBall => {
            let w = random_digits(rng, ctx.p(), ctx.precision(), false);
            offset(region, w, region.resolution_exponent())
        }
    }
}

fn offset(region: &UltrametricRegion, w: BigInt, e: i64) -> PadicRational {
    let step = BigRational::from_integer(w) * p_power(region.p(), e);
    &region.center + &region.center.sibling(step)
}
