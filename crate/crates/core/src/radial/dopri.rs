//! Dormand–Prince 5(4) for `u'' = f(r) u`, carrying `int u^2 dr` alongside.

use super::RadialError;

/// `[u, u', int u^2]`
pub(crate) type State = [f64; 3];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (equal to the last stage row).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const RENORM_ABOVE: f64 = 1e150;
const RENORM_BELOW: f64 = 1e-150;
const MAX_STEPS: usize = 2_000_000;

pub(crate) struct Stepper<F> {
    pub coef: F,
    pub rtol: f64,
    /// Signed step carried between calls.
    pub h: f64,
    /// `ln` of the factor divided out of `u` so far.
    pub log_scale: f64,
    pub steps: usize,
}

impl<F: Fn(f64) -> f64> Stepper<F> {
    fn rhs(&self, r: f64, y: &State) -> State {
        [y[1], (self.coef)(r) * y[0], y[0] * y[0]]
    }

    /// Advances `y` from `r0` to exactly `r1` (either direction).
    pub fn propagate(&mut self, y: &mut State, r0: f64, r1: f64) -> Result<(), RadialError> {
        let dir = (r1 - r0).signum();
        if dir == 0.0 {
            return Ok(());
        }
        if self.h == 0.0 || self.h.signum() != dir {
            self.h = dir * (r1 - r0).abs().min(1e-3 * r0.abs().max(1e-6));
        }
        let mut r = r0;
        while (r1 - r) * dir > 0.0 {
            if self.steps >= MAX_STEPS {
                return Err(RadialError::StepLimit { r });
            }
            let last = (r + self.h - r1) * dir >= 0.0;
            let h = if last { r1 - r } else { self.h };
            let (y_new, err) = self.trial(r, y, h);
            self.steps += 1;
            if err <= 1.0 {
                r = if last { r1 } else { r + h };
                *y = y_new;
                self.renormalize(y);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            let next = h * factor;
            if err <= 1.0 && last {
                // keep the unclipped proposal for the next call
                self.h = if next.abs() > self.h.abs() { next } else { self.h };
            } else {
                self.h = next;
            }
            if self.h.abs() < 1e-14 * r.abs().max(1e-300) {
                return Err(RadialError::StepLimit { r });
            }
        }
        Ok(())
    }

    fn trial(&self, r: f64, y: &State, h: f64) -> (State, f64) {
        let mut k = [[0.0; 3]; 7];
        k[0] = self.rhs(r, y);
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..3 {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k[s] = self.rhs(r + C[s] * h, &ys);
        }
        let mut y5 = *y;
        let mut e = [0.0; 3];
        for s in 0..7 {
            for i in 0..3 {
                y5[i] += h * B5[s] * k[s][i];
                e[i] += h * (B5[s] - B4[s]) * k[s][i];
            }
        }
        // u and u' share one magnitude so zeros of u do not stall the step size
        let mag = y[0].abs().max(y[1].abs()).max(y5[0].abs()).max(y5[1].abs());
        let sc = self.rtol * mag;
        let err = if sc > 0.0 {
            e[0].abs().max(e[1].abs()) / sc
        } else {
            0.0
        };
        (y5, err)
    }

    fn renormalize(&mut self, y: &mut State) {
        let mag = y[0].abs().max(y[1].abs());
        if mag > RENORM_ABOVE || (mag < RENORM_BELOW && mag > 0.0) {
            y[0] /= mag;
            y[1] /= mag;
            y[2] /= mag * mag;
            self.log_scale += mag.ln();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        // u'' = -u, u = sin r
        let mut s = Stepper {
            coef: |_| -1.0,
            rtol: 1e-10,
            h: 0.0,
            log_scale: 0.0,
            steps: 0,
        };
        let mut y = [0.0, 1.0, 0.0];
        s.propagate(&mut y, 0.0, 10.0).unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-8);
        assert!((y[1] - 10f64.cos()).abs() < 1e-8);
        // int sin^2 = r/2 - sin(2r)/4
        assert!((y[2] - (5.0 - 20f64.sin() / 4.0)).abs() < 1e-8);
        s.propagate(&mut y, 10.0, 0.0).unwrap();
        assert!(y[0].abs() < 1e-8 && (y[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn renormalizes_exponential_growth() {
        // u'' = u, u = e^r; e^400 overflows the renormalization threshold
        let mut s = Stepper {
            coef: |_| 1.0,
            rtol: 1e-10,
            h: 0.0,
            log_scale: 0.0,
            steps: 0,
        };
        let mut y = [1.0, 1.0, 0.0];
        s.propagate(&mut y, 0.0, 400.0).unwrap();
        assert!(s.log_scale > 0.0);
        let ln_u = y[0].ln() + s.log_scale;
        assert!((ln_u - 400.0).abs() < 1e-7);
        // int e^(2r) = (e^800 - 1)/2, stored over the squared scale
        let ln_i = y[2].ln() + 2.0 * s.log_scale;
        assert!((ln_i - (800.0 - 2f64.ln())).abs() < 1e-7);
    }
}
