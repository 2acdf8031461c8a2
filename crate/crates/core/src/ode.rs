//! Adaptive Dormand–Prince 5(4) stepper for two-component linear systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 2];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

pub(crate) struct Stepper {
    pub t: f64,
    pub y: State,
    h: f64,
    rtol: f64,
    /// Sign changes of `y[0]` seen at accepted steps.
    pub sign_changes: usize,
    last_sign: f64,
    max_steps: usize,
}

impl Stepper {
    pub fn new(t: f64, y: State, h0: f64, rtol: f64) -> Self {
        Self {
            t,
            y,
            h: h0,
            rtol,
            sign_changes: 0,
            last_sign: y[0].signum(),
            max_steps: 2_000_000,
        }
    }

    /// Multiplies the state by `s` (overflow control for linear systems).
    pub fn rescale(&mut self, s: f64) {
        self.y[0] *= s;
        self.y[1] *= s;
    }

    pub fn step_to<F: FnMut(f64, &State) -> State>(&mut self, t_end: f64, f: &mut F) -> Result<()> {
        while self.t < t_end {
            if self.max_steps == 0 {
                return Err(Error::Integration("step budget exhausted".into()));
            }
            self.max_steps -= 1;
            let remaining = t_end - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            let (y_new, err) = self.trial(h, f);
            let scale = self.rtol * (self.y[0].abs() + self.y[1].abs()).max(y_new[0].abs() + y_new[1].abs()) + 1e-300;
            let ratio = err / scale;
            if ratio.is_nan() {
                return Err(Error::Integration(format!("non-finite state at t = {}", self.t)));
            }
            if ratio <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                self.y = y_new;
                let s = self.y[0].signum();
                if self.y[0] != 0.0 {
                    if s != self.last_sign && self.last_sign != 0.0 {
                        self.sign_changes += 1;
                    }
                    self.last_sign = s;
                }
                let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the long step length when the last one was clipped
                self.h = if last { self.h.max(h * grow) } else { h * grow };
            } else {
                self.h = h * (0.9 * ratio.powf(-0.2)).max(0.1);
                if self.h < 1e-14 * (1.0 + self.t.abs()) {
                    return Err(Error::Integration(format!("step size underflow at t = {}", self.t)));
                }
            }
        }
        Ok(())
    }

    fn trial<F: FnMut(f64, &State) -> State>(&self, h: f64, f: &mut F) -> (State, f64) {
        let (t, y) = (self.t, &self.y);
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + h, &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y5);
        let e = axpy(&[0.0, 0.0], h, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        (y5, e[0].abs().max(e[1].abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let mut s = Stepper::new(0.0, [0.0, 1.0], 0.1, 1e-12);
        let mut f = |_t: f64, y: &State| [y[1], -y[0]];
        s.step_to(10.0, &mut f).unwrap();
        assert!((s.y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((s.y[1] - 10f64.cos()).abs() < 1e-10);
        assert_eq!(s.sign_changes, 3);
    }

    #[test]
    fn exact_stops() {
        let mut s = Stepper::new(0.0, [1.0, 0.0], 0.5, 1e-13);
        let mut f = |_t: f64, y: &State| [y[0], 0.0];
        for k in 1..=20 {
            s.step_to(k as f64 * 0.05, &mut f).unwrap();
            assert_eq!(s.t, k as f64 * 0.05);
        }
        assert!((s.y[0] - 1f64.exp()).abs() < 1e-12);
    }
}
