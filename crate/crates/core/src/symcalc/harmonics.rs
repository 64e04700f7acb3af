use std::f64::consts::PI;

/// Associated Legendre function `P_l^m(x)` for `0 <= m <= l`, Condon–Shortley phase included.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(m <= l, "assoc_legendre requires m <= l");
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * f64::from(2 * m + 1) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * f64::from(2 * ll - 1) * pmmp1 - f64::from(ll + m - 1) * pmm) / f64::from(ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)`
fn normalization(l: u32, m: u32) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= f64::from(k);
    }
    (f64::from(2 * l + 1) / (4.0 * PI) * ratio).sqrt()
}

/// Real spherical harmonic: `cos(m phi)` for `m > 0`, `sin(|m| phi)` for `m < 0`.
pub fn real_sph_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs();
    let base = normalization(l, am) * assoc_legendre(l, am, theta.cos());
    match m {
        0 => base,
        m if m > 0 => std::f64::consts::SQRT_2 * base * (f64::from(m) * phi).cos(),
        _ => std::f64::consts::SQRT_2 * base * (f64::from(am) * phi).sin(),
    }
}
