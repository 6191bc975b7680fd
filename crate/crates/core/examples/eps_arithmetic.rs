//! Rational functions in an infinitesimal ε: ordering, limits, evaluation.
use quasiproper::{rat, EpsPoly, EpsRat};

fn main() -> Result<(), quasiproper::EpsError> {
    let eps = EpsRat::eps();
    let one = EpsRat::one();
    // (1 - ε) / (1 + ε)
    let x = one.checked_sub(&eps)?.checked_div(&one.checked_add(&eps)?)?;
    println!("x = {x}");
    println!("lim x = {}", x.limit_at_zero()?);
    println!("x at ε = 1/10: {}", x.eval_at(&rat(1, 10))?);

    // any positive power of ε is below every positive rational
    let tiny = EpsRat::from_poly(EpsPoly::eps_pow(3));
    let small = EpsRat::constant(rat(1, 1_000_000));
    println!("ε³ < 1/10⁶: {}", tiny < small);
    println!("1 - ε < 1: {}", one.checked_sub(&eps)? < one);
    Ok(())
}
