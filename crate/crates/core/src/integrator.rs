//! Classical fourth-order Runge-Kutta stepping with observer hooks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AsSystem, WaveState};

/// State vector the stepper can combine linearly.
pub trait OdeState: Clone {
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn assign(&mut self, x: &Self);
    fn is_finite(&self) -> bool;
}

impl OdeState for WaveState {
    fn time(&self) -> f64 {
        self.t
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        for (dst, src) in self.fields_mut().into_iter().zip(x.fields()) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += a * s;
            }
        }
    }

    fn assign(&mut self, x: &Self) {
        for (dst, src) in self.fields_mut().into_iter().zip(x.fields()) {
            dst.copy_from_slice(src);
        }
        self.t = x.t;
    }

    fn is_finite(&self) -> bool {
        WaveState::is_finite(self)
    }
}

/// Right-hand side `y' = f(t, y)`; `out` has the shape of `y`.
pub trait Rhs<S> {
    fn eval(&mut self, y: &S, out: &mut S) -> Result<()>;
}

impl Rhs<WaveState> for AsSystem {
    fn eval(&mut self, y: &WaveState, out: &mut WaveState) -> Result<()> {
        AsSystem::eval(self, y, out)
    }
}

impl<S, F> Rhs<S> for F
where
    F: FnMut(&S, &mut S) -> Result<()>,
{
    fn eval(&mut self, y: &S, out: &mut S) -> Result<()> {
        self(y, out)
    }
}

/// Stage failure inside [`Rk4::step`]; the caller attaches the step index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageFault {
    pub stage: usize,
}

/// Reusable RK4 workspace.
#[derive(Debug, Clone)]
pub struct Rk4<S> {
    k: S,
    stage: S,
    acc: S,
}

impl<S: OdeState> Rk4<S> {
    pub fn new(like: &S) -> Self {
        Self {
            k: like.clone(),
            stage: like.clone(),
            acc: like.clone(),
        }
    }

    /// Advances `y` by `dt` in place. `dt` may be negative (used for
    /// reversibility checks); it must be finite and non-zero.
    ///
    /// On a non-finite stage `y` is left unchanged.
    pub fn step<R: Rhs<S>>(
        &mut self,
        y: &mut S,
        dt: f64,
        rhs: &mut R,
    ) -> Result<std::result::Result<(), StageFault>> {
        let t0 = y.time();
        self.acc.assign(y);

        rhs.eval(y, &mut self.k)?;
        if !self.k.is_finite() {
            return Ok(Err(StageFault { stage: 1 }));
        }
        self.acc.axpy(dt / 6.0, &self.k);

        for (stage, (frac, weight)) in [(0.5, 1.0 / 3.0), (0.5, 1.0 / 3.0), (1.0, 1.0 / 6.0)]
            .into_iter()
            .enumerate()
        {
            self.stage.assign(y);
            self.stage.axpy(frac * dt, &self.k);
            self.stage.set_time(t0 + frac * dt);
            rhs.eval(&self.stage, &mut self.k)?;
            if !self.k.is_finite() {
                return Ok(Err(StageFault { stage: stage + 2 }));
            }
            self.acc.axpy(weight * dt, &self.k);
        }
        if !self.acc.is_finite() {
            return Ok(Err(StageFault { stage: 4 }));
        }
        self.acc.set_time(t0 + dt);
        std::mem::swap(y, &mut self.acc);
        Ok(Ok(()))
    }
}

/// One RK4 step of size `dt > 0`, allocating a fresh workspace.
pub fn rk4_step<S: OdeState, R: Rhs<S>>(s: &S, dt: f64, rhs: &mut R) -> Result<S> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Evolve(format!("time step {dt} must be positive")));
    }
    let mut y = s.clone();
    match Rk4::new(s).step(&mut y, dt, rhs)? {
        Ok(()) => Ok(y),
        Err(StageFault { stage }) => {
            Err(Error::Evolve(format!("non-finite value in stage {stage}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub steps: usize,
    /// Steps between observer calls; step 0 and the final step are always
    /// observed.
    pub callback_stride: usize,
}

impl EvolveConfig {
    pub fn new(t_end: f64, steps: usize) -> Self {
        Self {
            t_end,
            steps,
            callback_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.callback_stride = stride;
        self
    }

    pub fn validate(&self, t0: f64) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Evolve("number of steps must be >= 1".into()));
        }
        if self.callback_stride == 0 {
            return Err(Error::Evolve("callback stride must be >= 1".into()));
        }
        if !(self.t_end > t0 && self.t_end.is_finite()) {
            return Err(Error::Evolve(format!(
                "t_end = {} must exceed the initial time {t0}",
                self.t_end
            )));
        }
        Ok(())
    }

    pub fn dt(&self, t0: f64) -> f64 {
        (self.t_end - t0) / self.steps as f64
    }
}

/// Observer verdict after seeing a state.
#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    Continue,
    Stop(String),
}

/// Read-only hook called on the observation schedule.
pub trait Observer {
    fn observe(&mut self, step: usize, state: &WaveState) -> Result<Control>;
}

impl<F> Observer for F
where
    F: FnMut(usize, &WaveState) -> Result<Control>,
{
    fn observe(&mut self, step: usize, state: &WaveState) -> Result<Control> {
        self(step, state)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StopEvent {
    pub step: usize,
    pub t: f64,
    pub observer: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EventLog {
    pub steps_taken: usize,
    pub observations: usize,
    pub stop: Option<StopEvent>,
}

/// Runs `config.steps` RK4 steps from `s`, calling every observer on the
/// schedule and halting at the first `Control::Stop`.
///
/// A non-finite stage aborts with [`Error::IntegrationFault`] carrying the
/// last finite state.
pub fn evolve<R: Rhs<WaveState>>(
    s: WaveState,
    config: &EvolveConfig,
    rhs: &mut R,
    observers: &mut [&mut dyn Observer],
) -> Result<(WaveState, EventLog)> {
    let t0 = s.t;
    config.validate(t0)?;
    let dt = config.dt(t0);
    let mut y = s;
    let mut rk = Rk4::new(&y);
    let mut log = EventLog::default();

    let mut notify = |step: usize, y: &WaveState, log: &mut EventLog| -> Result<bool> {
        log.observations += 1;
        for (idx, obs) in observers.iter_mut().enumerate() {
            if let Control::Stop(reason) = obs.observe(step, y)? {
                log.stop = Some(StopEvent {
                    step,
                    t: y.t,
                    observer: idx,
                    reason,
                });
                return Ok(true);
            }
        }
        Ok(false)
    };

    if notify(0, &y, &mut log)? {
        return Ok((y, log));
    }
    for step in 1..=config.steps {
        if let Err(StageFault { stage }) = rk.step(&mut y, dt, rhs)? {
            return Err(Error::IntegrationFault {
                step,
                stage,
                last_good: Box::new(y),
            });
        }
        // Avoid drift from repeated addition.
        y.t = t0 + step as f64 * dt;
        log.steps_taken = step;
        if (step % config.callback_stride == 0 || step == config.steps)
            && notify(step, &y, &mut log)?
        {
            break;
        }
    }
    Ok((y, log))
}
