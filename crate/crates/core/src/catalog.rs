//! Every coefficient transcribed from the source text lives here, in one
//! place, so that a run can be repeated against a deliberately corrupted
//! copy (`Catalog::mutate`) and must then fail.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{AlgebraError, FieldElement, MultiPoly, Tower};

/// The constant fields catalog entries are written over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseField {
    Q,
    Qi,
    QiSqrt3,
    Qt,
    Qit,
}

impl BaseField {
    pub fn tower(self) -> Tower {
        let q = Tower::rationals();
        let qi = || q.adjoin_root("i", "i^2 + 1").unwrap();
        match self {
            BaseField::Q => q,
            BaseField::Qi => qi(),
            BaseField::QiSqrt3 => qi().adjoin_root("sqrt3", "sqrt3^2 - 3").unwrap(),
            BaseField::Qt => q.with_function("t").unwrap(),
            BaseField::Qit => qi().with_function("t").unwrap(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum Items {
    /// Polynomials in the listed variables.
    Polys(Vec<String>),
    /// Bare field elements (coefficients of a templated equation).
    Coeffs(Vec<String>),
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub field: BaseField,
    pub vars: Vec<String>,
    pub items: Items,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mutation {
    pub key: String,
    pub item: usize,
    pub term: usize,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: BTreeMap<String, Entry>,
}

fn polys(field: BaseField, vars: &[&str], items: &[&str]) -> Entry {
    Entry {
        field,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        items: Items::Polys(items.iter().map(|s| s.to_string()).collect()),
    }
}

fn coeffs(field: BaseField, items: &[&str]) -> Entry {
    Entry {
        field,
        vars: Vec::new(),
        items: Items::Coeffs(items.iter().map(|s| s.to_string()).collect()),
    }
}

const WXYZ: &[&str] = &["W", "X", "Y", "Z"];
const XYZ: &[&str] = &["x", "y", "z"];

impl Catalog {
    /// The data as printed.
    pub fn paper() -> Catalog {
        use BaseField::*;
        let mut e = BTreeMap::new();
        let mut put = |k: &str, v: Entry| {
            e.insert(k.to_string(), v);
        };
        put("surface.s6prime", polys(Qit, WXYZ, &["X^4 + Y^3*W + Z^2 - t*W^4"]));
        put("surface.s6", polys(Qit, WXYZ, &["Z*(W*Z - 2*i*X^2) - t*W^3 + Y^3"]));
        put("surface.s7", polys(Qt, WXYZ, &["X^3*Y + Y^3*W + Z^2 - t*W^4"]));
        put("surface.s8", polys(Qt, WXYZ, &["X^5*W + Y^3 + Z^2 - t*W^6"]));
        // x^(n-1) w^2, x y^2, z^2, w^2
        put("surface.dn.chart0", coeffs(Qt, &["1", "1", "1", "-t"]));
        // w^2, y^2, x z^2, x^(n-1) w^2 (n even) / w^2, x y^2, z^2, x^(n-1) w^2 (n odd)
        put("surface.dn.chartinf.even", coeffs(Qt, &["1", "1", "1", "-t"]));
        put("surface.dn.chartinf.odd", coeffs(Qt, &["1", "1", "1", "-t"]));
        // x^n w^2, y z, w^2
        put("surface.an.chart", coeffs(Qt, &["1", "-1", "-t"]));

        put("klein.e6", polys(Q, XYZ, &["x^4 + y^3 + z^2"]));
        put("klein.e7", polys(Q, XYZ, &["x^3*y + y^3 + z^2"]));
        put("klein.e8", polys(Q, XYZ, &["x^5 + y^3 + z^2"]));
        // x^(n-1), x y^2, z^2
        put("klein.dn", coeffs(Q, &["1", "1", "1"]));
        // x^n, y z
        put("klein.an", coeffs(Q, &["1", "-1"]));

        put("contraction.chart1", polys(Qit, WXYZ, &["W^2", "W*X", "W*Y", "Z + i*X^2"]));
        put(
            "contraction.chart2",
            polys(
                Qit,
                WXYZ,
                &["W*(Z - i*X^2)", "X*(Z - i*X^2)", "Y*(Z - i*X^2)", "t*W^3 - Y^3"],
            ),
        );

        // Z = 0 is implicit for these lines
        put("s6.alpha_line", polys(Qi, &["W", "X", "Y", "Z", "alpha"], &["Y - alpha*W"]));
        put(
            "s6.mu_lines",
            polys(
                QiSqrt3,
                &["W", "X", "Y", "Z", "mu"],
                &[
                    "27*i*mu^6*(sqrt3 + 3)*W + 18*X*mu^3 + (-9 + 5*sqrt3)*Z",
                    "9*i*mu^2*(sqrt3 - 1)*Y + 18*X*mu^3 + 2*(3 - 2*sqrt3)*Z",
                ],
            ),
        );
        put("s6.mu_radicand", coeffs(QiSqrt3, &["1/27*(-5 + 26/9*sqrt3)", "1/27*(-5 - 26/9*sqrt3)"]));

        let s7v = &["a", "b", "c", "d", "e", "t"];
        put("s7.b", polys(Q, s7v, &["-e^2"]));
        put("s7.a", polys(Q, s7v, &["-2*e*d + e^6"]));
        put("s7.c", polys(Q, s7v, &["-(d^2 - 6*d*e^5 + 3*e^10)", "2*e"]));
        put(
            "s7.coefficients",
            polys(
                Q,
                s7v,
                &[
                    "d^4 - 44*d^3*e^5 + 90*d^2*e^10 - 60*d*e^15 + 13*e^20 - 4*e^2*t",
                    "4*e^2",
                    "-d^3 - 6*d^2*e^5 + 9*d*e^10 - 3*e^15",
                    "e",
                ],
            ),
        );
        put(
            "s7.multipliers",
            polys(Q, s7v, &["e*(28*d + 204*e^5)", "7*d^2 - 299*d*e^5 + 243*e^10"]),
        );
        put("s7.d", polys(Q, s7v, &["6*e^5*(11*e^18 + 34*t)", "115*e^18 - 28*t"]));
        put(
            "s7.residual",
            polys(
                Q,
                s7v,
                &[
                    "-111*e^14*(e^54 - 29496*e^36*t + 401808*e^18*t^2 - 64*t^3)",
                    "(115*e^18 - 28*t)^3",
                ],
            ),
        );
        put("s7.Q", polys(Q, &["X"], &["X^3 - 29496*X^2 + 401808*X - 64"]));
        // Y = 0 is implicit; s ranges over the square roots of t
        put("s7.e0_curves", polys(Q, &["W", "X", "Y", "Z", "s"], &["Z - s*W^2"]));

        let s8v = &["a", "b", "mu"];
        put("s8.f", polys(Q, s8v, &["1 + 3*mu^4*b", "2*mu^3"]));
        put("s8.e", polys(Q, s8v, &["12*mu^10*a + 3*mu^8*b^2 - 6*mu^4*b - 1", "8*mu^9"]));
        put(
            "s8.d",
            polys(
                Q,
                s8v,
                &[
                    "12*mu^14*a*b - mu^12*b^3 - 12*mu^10*a + 15*mu^8*b^2 + 9*mu^4*b + 1",
                    "16*mu^15",
                ],
            ),
        );
        put(
            "s8.a",
            polys(
                Q,
                s8v,
                &[
                    "10*b^4*mu^16 + 85*b^3*mu^12 + 90*b^2*mu^8 + 25*mu^4*b + 2",
                    "30*mu^10*(b^2*mu^8 + 4*mu^4*b + 1)",
                ],
            ),
        );
        put("s8.guard", polys(Q, s8v, &["b^2*mu^8 + 4*mu^4*b + 1"]));
        put(
            "s8.P",
            polys(
                Q,
                s8v,
                &[
                    "5*b^4*mu^16 - 690*mu^12*b^3 - 260*mu^8*b^2 - 30*mu^4*b - 1",
                    "5*b^4*mu^16 + 10*mu^12*b^3 - 20*mu^8*b^2 - 10*mu^4*b - 1",
                ],
            ),
        );
        put(
            "s8.b1",
            polys(
                Q,
                &["mu", "t"],
                &[
                    "-5*(16307084980800*mu^90*t^3 - 60864048645838405658640*mu^60*t^2 \
                     + 1761869851700383404*t*mu^30 - 2251428325403)",
                    "2*mu^4*(198455329800000*mu^90*t^3 - 740708401360188117142800*mu^60*t^2 \
                     + 20921826963788922780*t*mu^30 - 40377544164371)",
                ],
            ),
        );
        put(
            "s8.Q",
            polys(
                Q,
                &["X"],
                &[
                    "108000*X*(5400*X^3 - 20154789349200*X^2 + 522900235*X + 1254) + 1",
                    "108000*X*(5400*X^3 - 10810800*X^2 - 44551045*X - 611864) + 1",
                ],
            ),
        );

        put("autos.tau", polys(Qi, XYZ, &["-1/2*x + i/2*y", "3/2*i*x - 1/2*y", "z"]));
        let sv = &["s", "eps"];
        put("autos.param.e6", polys(Q, sv, &["s^3", "s^4", "eps*s^6"]));
        put("autos.param.e7", polys(Q, sv, &["s^4", "s^6", "s^9"]));
        put("autos.param.e8", polys(Q, sv, &["s^6", "s^10", "s^15"]));
        // exponents c0 + c1*n of lambda in (lambda^2 x, ±lambda^(n-2) y, ±lambda^(n-1) z)
        put("autos.param.dn", coeffs(Q, &["2", "0", "-2", "1", "-1", "1"]));

        put("degrees.e", coeffs(Q, &["12", "18", "30"]));
        Catalog { entries: e }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn entry(&self, key: &str) -> Result<&Entry, AlgebraError> {
        self.entries.get(key).ok_or_else(|| AlgebraError::UnknownSymbol(key.to_string()))
    }

    fn var_refs(e: &Entry) -> Vec<&str> {
        e.vars.iter().map(|s| s.as_str()).collect()
    }

    /// The polynomials of an entry, over the entry's own field.
    pub fn polys(&self, key: &str) -> Result<Vec<MultiPoly>, AlgebraError> {
        let e = self.entry(key)?;
        let Items::Polys(items) = &e.items else {
            return Err(AlgebraError::Unsupported(format!("{key} holds coefficients")));
        };
        let tower = e.field.tower();
        let vars = Self::var_refs(e);
        items.iter().map(|s| MultiPoly::parse(&tower, &vars, s)).collect()
    }

    pub fn poly(&self, key: &str) -> Result<MultiPoly, AlgebraError> {
        Ok(self.polys(key)?.swap_remove(0))
    }

    /// The polynomials of an entry, moved into `tower` (which must extend the
    /// entry's field) with the variables `vars`; entry variables that are
    /// generators of `tower` are substituted by those generators.
    pub fn polys_in(&self, key: &str, tower: &Tower, vars: &[&str]) -> Result<Vec<MultiPoly>, AlgebraError> {
        let e = self.entry(key)?;
        let images: Vec<MultiPoly> = e
            .vars
            .iter()
            .map(|v| {
                if vars.contains(&v.as_str()) {
                    MultiPoly::var(tower, vars, v)
                } else {
                    Ok(MultiPoly::constant(tower, vars, &tower.gen(v)?))
                }
            })
            .collect::<Result<_, _>>()?;
        self.polys(key)?.iter().map(|p| p.compose(&images)).collect()
    }

    pub fn coeffs(&self, key: &str) -> Result<Vec<FieldElement>, AlgebraError> {
        let e = self.entry(key)?;
        let Items::Coeffs(items) = &e.items else {
            return Err(AlgebraError::Unsupported(format!("{key} holds polynomials")));
        };
        let tower = e.field.tower();
        items.iter().map(|s| tower.parse(s)).collect()
    }

    /// Coefficient moved into an extension tower.
    pub fn coeffs_in(&self, key: &str, tower: &Tower) -> Result<Vec<FieldElement>, AlgebraError> {
        self.coeffs(key)?.iter().map(|c| tower.lift(c)).collect()
    }

    /// Every mutable coefficient position: (key, item, term).
    pub fn slots(&self) -> Vec<(String, usize, usize)> {
        let mut out = Vec::new();
        for (k, e) in &self.entries {
            match &e.items {
                Items::Coeffs(v) => {
                    out.extend((0..v.len()).map(|i| (k.clone(), i, 0)));
                }
                Items::Polys(_) => {
                    for (i, p) in self.polys(k).unwrap().iter().enumerate() {
                        out.extend((0..p.num_terms()).map(|j| (k.clone(), i, j)));
                    }
                }
            }
        }
        out
    }

    /// A copy with exactly one coefficient changed, chosen uniformly among
    /// all slots. The new value differs from the old one, from its negative
    /// and from zero, so no mutation is a mere rescaling of a sign-symmetric
    /// term.
    pub fn mutate(&self, seed: u64) -> (Catalog, Mutation) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slots = self.slots();
        let (key, item, term) = slots[rng.random_range(0..slots.len())].clone();
        let entry = &self.entries[&key];
        let tower = entry.field.tower();
        let mut shift = |c: &FieldElement| loop {
            let n: i64 = rng.random_range(-9..=9);
            let d: i64 = rng.random_range(1..=4);
            if n == 0 {
                continue;
            }
            let after = c + &tower.rational(&BigRational::new(n.into(), d.into()));
            if !after.is_zero() && after != -c {
                return after;
            }
        };
        let mut next = entry.clone();
        let (before, after) = match &mut next.items {
            Items::Coeffs(v) => {
                let c = tower.parse(&v[item]).unwrap();
                let m = shift(&c);
                v[item] = m.to_string();
                (c.to_string(), m.to_string())
            }
            Items::Polys(v) => {
                let vars = Self::var_refs(entry);
                let p = MultiPoly::parse(&tower, &vars, &v[item]).unwrap();
                let (mono, c) = p.terms().nth(term).map(|(m, c)| (m.clone(), c)).unwrap();
                let m = shift(&c);
                let q = &p + &p.monomial_like(&mono.0, &(&m - &c));
                v[item] = q.to_string();
                (p.to_string(), q.to_string())
            }
        };
        let mut entries = self.entries.clone();
        entries.insert(key.clone(), next);
        (Catalog { entries }, Mutation { key, item, term, before, after })
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::paper()
    }
}
