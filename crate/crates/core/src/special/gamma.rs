use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_pole(z: C64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    Ok(())
}

fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal-sheet log Γ(z), continuous off the negative real axis.
pub fn ln_gamma_complex(z: C64) -> Result<C64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let s = (PI * z).sin();
        Ok(C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    }
}

/// Γ(z) by the Lanczos approximation (g = 7, nine terms) with reflection.
pub fn gamma_complex(z: C64) -> Result<C64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z).exp())
    } else {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    }
}
