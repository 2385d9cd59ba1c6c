//! Normalization constants `γ_a` and `γ̄_a`.

use std::fmt;
use std::str::FromStr;


use crate::calculus::Kind;
use crate::scalar::{Field, GaussRat, IndexData, Params};

use super::FrameError;

/// How one constant departs from its default.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaValue {
    /// `c * default`.
    Scaled(GaussRat),
    /// An exact scalar in the text syntax.
    Exact(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaOverride {
    pub kind: Kind,
    pub label: i32,
    pub value: GammaValue,
}

/// Resolves the sign and ratio freedom left by the product constraints.
///
/// Text form: comma-separated items `gamma<a>=<value>` or `gammabar<a>=<value>`,
/// where the value is `default`, `<c>*default` or a bracketed exact scalar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GammaChoice {
    pub overrides: Vec<GammaOverride>,
}

impl FromStr for GammaChoice {
    type Err = FrameError;

    fn from_str(src: &str) -> Result<Self, FrameError> {
        let bad = |m: String| FrameError::Gamma(m);
        let mut overrides = Vec::new();
        for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item.split_once('=').ok_or_else(|| bad(format!("missing '=' in '{item}'")))?;
            let name = name.trim();
            let (kind, label) = if let Some(rest) = name.strip_prefix("gammabar") {
                (Kind::Barred, rest)
            } else if let Some(rest) = name.strip_prefix("gamma") {
                (Kind::Unbarred, rest)
            } else {
                return Err(bad(format!("unknown constant '{name}'")));
            };
            let label: i32 = label.parse().map_err(|_| bad(format!("bad label in '{name}'")))?;
            let value = value.trim();
            let value = if value == "default" {
                GammaValue::Scaled(GaussRat::one())
            } else if let Some(c) = value.strip_suffix("*default") {
                GammaValue::Scaled(c.trim().parse().map_err(|_| bad(format!("bad factor in '{item}'")))?)
            } else if let Some(body) = value.strip_prefix('[').and_then(|v| v.strip_suffix(']')) {
                GammaValue::Exact(body.to_string())
            } else {
                return Err(bad(format!("bad value in '{item}'")));
            };
            overrides.push(GammaOverride { kind, label, value });
        }
        Ok(GammaChoice { overrides })
    }
}

impl fmt::Display for GammaChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .overrides
            .iter()
            .map(|o| {
                let name = match o.kind {
                    Kind::Unbarred => "gamma",
                    Kind::Barred => "gammabar",
                };
                let v = match &o.value {
                    GammaValue::Scaled(c) => format!("{c}*default"),
                    GammaValue::Exact(s) => format!("[{s}]"),
                };
                format!("{name}{}={v}", o.label)
            })
            .collect();
        f.write_str(&items.join(","))
    }
}

/// `γ_a γ_{-a}` required for `a > 0`, and `γ_0` for odd `N`.
pub fn required_product<F: Field>(p: &Params<F>, idx: &IndexData, kind: Kind, a: i32) -> F {
    let e = -kind.sign();
    let hi = p.h().inv().expect("h is nonzero");
    let ki = p.k().inv().expect("k is nonzero");
    match a {
        0 => p.s_pow(e) * &hi * &F::from_i64(-kind.sign() as i64),
        1 if idx.is_odd() => -(p.q_pow(e) * &hi * &hi),
        1 => ki.clone() * &ki,
        _ => -(p.q_pow(e) * &ki * &ki * &p.omega(idx, a) * &p.omega(idx, a - 1)),
    }
}

/// The default split of each product into `(γ_a, γ_{-a})`.
fn default_pair<F: Field>(p: &Params<F>, idx: &IndexData, kind: Kind, a: i32) -> (F, F) {
    let e = -kind.sign();
    let i = F::imag_unit();
    match a {
        1 if idx.is_odd() => {
            let g = i * &p.s_pow(e) * &p.h().inv().expect("h is nonzero");
            (g.clone(), g)
        }
        1 => {
            let g = p.k().inv().expect("k is nonzero");
            (g.clone(), g)
        }
        _ => {
            let c = i * &p.s_pow(e) * &p.k().inv().expect("k is nonzero");
            (c.clone() * &p.omega(idx, a), c * &p.omega(idx, a - 1))
        }
    }
}

impl GammaChoice {
    /// Constants for one calculus, by index position.
    pub fn resolve<F: Field>(&self, p: &Params<F>, idx: &IndexData, kind: Kind) -> Result<Vec<F>, FrameError> {
        let mut out = vec![F::zero(); idx.dim()];
        if idx.is_odd() {
            out[idx.pos(0)] = required_product(p, idx, kind, 0);
        }
        for a in 1..=idx.rank() as i32 {
            let (g, gm) = default_pair(p, idx, kind, a);
            out[idx.pos(a)] = g;
            out[idx.pos(-a)] = gm;
        }
        self.apply(&mut out, idx, kind)?;
        Ok(out)
    }

    fn apply<F: Field>(&self, out: &mut [F], idx: &IndexData, kind: Kind) -> Result<(), FrameError> {
        for o in self.overrides.iter().filter(|o| o.kind == kind) {
            if !idx.has_label(o.label) {
                return Err(FrameError::Gamma(format!("no index {} at N={}", o.label, idx.dim())));
            }
            let slot = &mut out[idx.pos(o.label)];
            *slot = match &o.value {
                GammaValue::Scaled(c) => slot.clone() * &F::from_gauss(c),
                GammaValue::Exact(s) => F::parse_scalar(s).map_err(|e| FrameError::Gamma(e.to_string()))?,
            };
        }
        Ok(())
    }

    /// Constants that glue both halves for odd `N`, as `(γ, γ̄)` by position:
    /// `γ̄ = -q γ`, `γ_0` as required and `γ_{±1}` with `γ_1^2 = -q^{-2} h^{-2}`.
    /// For `a > 1` the even split needs `√(ω_a ω_{a-1})`, so the default split
    /// is kept; the mixed relation only sees `γ̄ / γ`.
    pub fn resolve_glued<F: Field>(&self, p: &Params<F>, idx: &IndexData) -> Result<(Vec<F>, Vec<F>), FrameError> {
        if !idx.is_odd() {
            return Err(FrameError::Gamma("gluing needs odd N".into()));
        }
        let mut g = vec![F::zero(); idx.dim()];
        g[idx.pos(0)] = required_product(p, idx, Kind::Unbarred, 0);
        let g1 = F::imag_unit() * &p.q_pow(-1) * &p.h().inv().expect("h is nonzero");
        g[idx.pos(-1)] = g1.clone() * &p.q();
        g[idx.pos(1)] = g1;
        for a in 2..=idx.rank() as i32 {
            let (ga, gm) = default_pair(p, idx, Kind::Unbarred, a);
            g[idx.pos(a)] = ga;
            g[idx.pos(-a)] = gm;
        }
        self.apply(&mut g, idx, Kind::Unbarred)?;
        let mq = -p.q();
        let mut gb: Vec<F> = g.iter().map(|v| v.clone() * &mq).collect();
        self.apply(&mut gb, idx, Kind::Barred)?;
        Ok((g, gb))
    }
}

/// Names the first product constraint the constants violate.
pub fn check_constraints<F: Field>(p: &Params<F>, idx: &IndexData, kind: Kind, g: &[F]) -> Result<(), String> {
    let name = match kind {
        Kind::Unbarred => "gamma",
        Kind::Barred => "gammabar",
    };
    if idx.is_odd() {
        let want = required_product(p, idx, kind, 0);
        if g[idx.pos(0)] != want {
            return Err(format!("{name}0 = {want} violated"));
        }
    }
    for a in 1..=idx.rank() as i32 {
        let want = required_product(p, idx, kind, a);
        if g[idx.pos(a)].clone() * &g[idx.pos(-a)] != want {
            return Err(format!("{name}{a} {name}-{a} = {want} violated"));
        }
    }
    Ok(())
}
