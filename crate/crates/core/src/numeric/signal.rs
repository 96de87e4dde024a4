//! Test signals with closed-form evaluators.
//!
//! Signals are described, not sampled: each variant knows its value at any
//! `t`, so delaying one is exact (`delayed(delta)` evaluates the original
//! at `t - delta`). The *quiet prefix* is an initial interval on which the
//! signal is identically zero; shift tests require it to be at least as
//! long as the delay so that delaying the input discards no history.

use std::fmt;

/// A named, exactly-shiftable test input.
#[derive(Clone, Debug, PartialEq)]
pub enum TestSignal {
    Zero,
    Constant {
        level: f64,
    },
    /// 0 for t < onset, 1 afterwards.
    Step {
        onset: f64,
    },
    /// 0 for t < onset, t - onset afterwards.
    Ramp {
        onset: f64,
    },
    /// 0 for t < onset, sin(2*pi*freq*(t - onset)) afterwards.
    SineBurst {
        onset: f64,
        freq: f64,
    },
    /// Gaussian bump centered at `center`, hard-truncated to
    /// |t - center| <= 6*width so the support is exactly compact (the edge
    /// value, e^-18 ~ 1.5e-8, is below every tolerance in use).
    GaussPulse {
        center: f64,
        width: f64,
    },
    /// The inner signal shifted later by `delta` (negative = earlier).
    Delayed {
        inner: Box<TestSignal>,
        delta: f64,
    },
    /// alpha*x1 + beta*x2 on a shared clock.
    Combined {
        alpha: f64,
        x1: Box<TestSignal>,
        beta: f64,
        x2: Box<TestSignal>,
    },
}

impl TestSignal {
    pub fn step_at(onset: f64) -> TestSignal {
        TestSignal::Step { onset }
    }

    pub fn constant(level: f64) -> TestSignal {
        TestSignal::Constant { level }
    }

    pub fn sine_burst(onset: f64, freq: f64) -> TestSignal {
        TestSignal::SineBurst { onset, freq }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TestSignal::Zero => 0.0,
            TestSignal::Constant { level } => *level,
            TestSignal::Step { onset } => {
                if t >= *onset {
                    1.0
                } else {
                    0.0
                }
            }
            TestSignal::Ramp { onset } => {
                if t >= *onset {
                    t - onset
                } else {
                    0.0
                }
            }
            TestSignal::SineBurst { onset, freq } => {
                if t >= *onset {
                    (2.0 * std::f64::consts::PI * freq * (t - onset)).sin()
                } else {
                    0.0
                }
            }
            TestSignal::GaussPulse { center, width } => {
                let s = (t - center) / width;
                if s.abs() <= 6.0 {
                    (-0.5 * s * s).exp()
                } else {
                    0.0
                }
            }
            TestSignal::Delayed { inner, delta } => inner.eval(t - delta),
            TestSignal::Combined {
                alpha,
                x1,
                beta,
                x2,
            } => alpha * x1.eval(t) + beta * x2.eval(t),
        }
    }

    /// Length of the initial interval on which the signal is exactly zero.
    pub fn quiet_prefix(&self) -> f64 {
        match self {
            TestSignal::Zero => f64::INFINITY,
            TestSignal::Constant { level } => {
                if *level == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            TestSignal::Step { onset } | TestSignal::Ramp { onset } => onset.max(0.0),
            TestSignal::SineBurst { onset, .. } => onset.max(0.0),
            TestSignal::GaussPulse { center, width } => (center - 6.0 * width).max(0.0),
            TestSignal::Delayed { inner, delta } => {
                let q = inner.quiet_prefix();
                if q.is_infinite() {
                    q
                } else {
                    (q + delta).max(0.0)
                }
            }
            TestSignal::Combined { x1, x2, .. } => x1.quiet_prefix().min(x2.quiet_prefix()),
        }
    }

    /// Shift later by `delta > 0`; the delayed signal is zero until `delta`
    /// plus the original quiet prefix.
    pub fn delayed(&self, delta: f64) -> TestSignal {
        TestSignal::Delayed {
            inner: Box::new(self.clone()),
            delta,
        }
    }

    /// Shift earlier by `delta > 0` (evaluates the original at `t + delta`).
    pub fn advanced(&self, delta: f64) -> TestSignal {
        TestSignal::Delayed {
            inner: Box::new(self.clone()),
            delta: -delta,
        }
    }

    pub fn combined(alpha: f64, x1: &TestSignal, beta: f64, x2: &TestSignal) -> TestSignal {
        TestSignal::Combined {
            alpha,
            x1: Box::new(x1.clone()),
            beta,
            x2: Box::new(x2.clone()),
        }
    }

    /// Parse a signal reference: `zero`, `step@1`, `ramp@1`, `sine@1:f=1`,
    /// `gauss@2:w=0.3`, `const:v=3`.
    pub fn from_spec(spec: &str) -> Result<TestSignal, String> {
        let (head, params) = match spec.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (spec, None),
        };
        let (name, at) = match head.split_once('@') {
            Some((n, a)) => {
                let v: f64 = a
                    .parse()
                    .map_err(|_| format!("bad offset `{a}` in signal `{spec}`"))?;
                (n, Some(v))
            }
            None => (head, None),
        };
        let mut kv = std::collections::BTreeMap::new();
        if let Some(params) = params {
            for pair in params.split(',') {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| format!("bad parameter `{pair}` in signal `{spec}`"))?;
                let v: f64 = v
                    .parse()
                    .map_err(|_| format!("bad value `{v}` in signal `{spec}`"))?;
                kv.insert(k.to_string(), v);
            }
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64, String> {
            kv.get(key)
                .copied()
                .or(default)
                .ok_or_else(|| format!("signal `{spec}` needs `{key}=`"))
        };
        match name {
            "zero" => Ok(TestSignal::Zero),
            "const" => Ok(TestSignal::Constant {
                level: get("v", None)?,
            }),
            "step" => Ok(TestSignal::Step {
                onset: at.unwrap_or(0.0),
            }),
            "ramp" => Ok(TestSignal::Ramp {
                onset: at.unwrap_or(0.0),
            }),
            "sine" => Ok(TestSignal::SineBurst {
                onset: at.unwrap_or(0.0),
                freq: get("f", Some(1.0))?,
            }),
            "gauss" => Ok(TestSignal::GaussPulse {
                center: at.unwrap_or(0.0),
                width: get("w", Some(0.3))?,
            }),
            other => Err(format!("unknown signal `{other}`")),
        }
    }
}

impl fmt::Display for TestSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestSignal::Zero => write!(f, "zero"),
            TestSignal::Constant { level } => write!(f, "const:v={level}"),
            TestSignal::Step { onset } => write!(f, "step@{onset}"),
            TestSignal::Ramp { onset } => write!(f, "ramp@{onset}"),
            TestSignal::SineBurst { onset, freq } => write!(f, "sine@{onset}:f={freq}"),
            TestSignal::GaussPulse { center, width } => write!(f, "gauss@{center}:w={width}"),
            TestSignal::Delayed { inner, delta } => {
                if *delta >= 0.0 {
                    write!(f, "delay({inner},{delta})")
                } else {
                    write!(f, "advance({inner},{})", -delta)
                }
            }
            TestSignal::Combined {
                alpha,
                x1,
                beta,
                x2,
            } => write!(f, "{alpha}*({x1}) + {beta}*({x2})"),
        }
    }
}
