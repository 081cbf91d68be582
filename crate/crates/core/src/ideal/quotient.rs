use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::{Engine, Ideal};
use crate::poly::{MonomialOrder, Polynomial, Ring};

/// `k[x_1..x_n]/J`, elements represented by polynomials up to `J`.
#[derive(Clone, Debug)]
pub struct CoordinateRing {
    ring: Ring,
    relations: Ideal,
}

impl CoordinateRing {
    pub fn new(relations: Ideal) -> CoordinateRing {
        CoordinateRing {
            ring: relations.ring().clone(),
            relations,
        }
    }

    pub fn polynomial(ring: &Ring) -> CoordinateRing {
        CoordinateRing::new(Ideal::zero(ring))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    /// Canonical representative: the grevlex normal form modulo `J`.
    pub fn reduce(&self, eng: &Engine, f: &Polynomial) -> Result<Polynomial> {
        if self.relations.is_zero() {
            self.ring.ensure_same(f.ring())?;
            return Ok(f.clone());
        }
        self.relations.normal_form(eng, f)
    }

    pub fn is_zero(&self, eng: &Engine, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(eng, f)?.is_zero())
    }

    pub fn equal(&self, eng: &Engine, a: &Polynomial, b: &Polynomial) -> Result<bool> {
        self.is_zero(eng, &a.try_sub(b)?)
    }

    pub fn is_zero_ring(&self, eng: &Engine) -> Result<bool> {
        self.relations.is_unit(eng)
    }

    pub fn is_unit(&self, eng: &Engine, f: &Polynomial) -> Result<bool> {
        self.relations.with(std::slice::from_ref(f))?.is_unit(eng)
    }

    /// The ideal of `k[x]` lifting `(gens)` of this ring, i.e. `(gens) + J`.
    pub fn lift(&self, gens: &[Polynomial]) -> Result<Ideal> {
        self.relations.with(gens)
    }

    /// Equality of the ideals `(a) + J` and `(b) + J`.
    pub fn same_ideal(&self, eng: &Engine, a: &[Polynomial], b: &[Polynomial]) -> Result<bool> {
        self.lift(a)?.same_ideal(eng, &self.lift(b)?)
    }

    /// `f` is a nonzerodivisor when `J : f = J`.
    pub fn is_nonzerodivisor(&self, eng: &Engine, f: &Polynomial) -> Result<bool> {
        if self.is_zero(eng, f)? {
            return self.is_zero_ring(eng);
        }
        let colon = self.relations.quotient_by(eng, f)?;
        colon.same_ideal(eng, &self.relations)
    }

    /// Inverse of a unit, reduced; `None` when `f` is not a unit.
    pub fn inverse(&self, eng: &Engine, f: &Polynomial) -> Result<Option<Polynomial>> {
        self.ring.ensure_same(f.ring())?;
        if !self.is_unit(eng, f)? {
            return Ok(None);
        }
        let big = self.ring.with_leading_vars(&["t"]);
        let mapping: Vec<usize> = (1..=self.ring.nvars()).collect();
        let mut gens: Vec<Polynomial> = self
            .relations
            .generators()
            .iter()
            .map(|g| g.embed(&big, &mapping))
            .collect();
        let t = Polynomial::var(&big, 0);
        gens.push(&(&t * &f.embed(&big, &mapping)) - &Polynomial::one(&big));
        let gb = eng.groebner(&big, &gens, MonomialOrder::Block(1))?;
        let nf = gb.normal_form(&t);
        let inv = nf
            .restrict(&self.ring, &mapping)
            .ok_or_else(|| Error::Verification("inverse normal form still involves t".into()))?;
        self.reduce(eng, &inv).map(Some)
    }

    /// Some `q` with `d·q = c` in this ring, found by saturating
    /// `J + (d·z - c)` at `d` in `R[z]`. Unique when `d` is a nonzerodivisor;
    /// `None` when no quotient is found.
    pub fn exact_div(
        &self,
        eng: &Engine,
        c: &Polynomial,
        d: &Polynomial,
    ) -> Result<Option<Polynomial>> {
        self.ring.ensure_same(c.ring())?;
        self.ring.ensure_same(d.ring())?;
        if self.is_zero(eng, d)? {
            return if self.is_zero(eng, c)? {
                Ok(Some(Polynomial::zero(&self.ring)))
            } else {
                Ok(None)
            };
        }
        if let Some(dc) = d.constant_value() {
            return self.reduce(eng, &c.scale(&dc.inv()?)).map(Some);
        }
        if self.relations.is_zero() {
            return c.exact_div(d);
        }
        if let Some(q) = c.exact_div(d)? {
            return self.reduce(eng, &q).map(Some);
        }
        let big = self.ring.with_leading_vars(&["z"]);
        let mapping: Vec<usize> = (1..=self.ring.nvars()).collect();
        let z = Polynomial::var(&big, 0);
        let (cb, db) = (c.embed(&big, &mapping), d.embed(&big, &mapping));
        let mut gens: Vec<Polynomial> = self
            .relations
            .generators()
            .iter()
            .map(|g| g.embed(&big, &mapping))
            .collect();
        gens.push(&(&db * &z) - &cb);
        let sat = Ideal::new(&big, gens)?.saturate(eng, &db)?;
        let gb = eng.groebner(&big, sat.generators(), MonomialOrder::Block(1))?;
        let Some(q) = gb.normal_form(&z).restrict(&self.ring, &mapping) else {
            return Ok(None);
        };
        if self.equal(eng, &(d * &q), c)? {
            self.reduce(eng, &q).map(Some)
        } else {
            Ok(None)
        }
    }
}

impl fmt::Display for CoordinateRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relations.is_zero() {
            write!(f, "{}", self.ring)
        } else {
            write!(f, "{}/{}", self.ring, self.relations)
        }
    }
}

/// A `k`-algebra map `k[x]/J -> k[y]/J'` given by images of the variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: CoordinateRing,
    target: CoordinateRing,
    images: Vec<Polynomial>,
}

impl RingMap {
    /// Checks that every relation of the source maps to zero in the target.
    pub fn new(
        eng: &Engine,
        source: CoordinateRing,
        target: CoordinateRing,
        images: Vec<Polynomial>,
    ) -> Result<RingMap> {
        if images.len() != source.ring().nvars() {
            return Err(Error::usage(format!(
                "map needs {} images, got {}",
                source.ring().nvars(),
                images.len()
            )));
        }
        for img in &images {
            target.ring().ensure_same(img.ring())?;
        }
        for rel in source.relations().generators() {
            let image = rel.substitute(&images, target.ring())?;
            if !target.is_zero(eng, &image)? {
                return Err(Error::usage(format!(
                    "map is not well defined: relation {rel} maps to {image}"
                )));
            }
        }
        Ok(RingMap {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &CoordinateRing {
        &self.source
    }

    pub fn target(&self) -> &CoordinateRing {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Image of `f`, reduced in the target.
    pub fn apply(&self, eng: &Engine, f: &Polynomial) -> Result<Polynomial> {
        self.source.ring().ensure_same(f.ring())?;
        let img = f.substitute(&self.images, self.target.ring())?;
        self.target.reduce(eng, &img)
    }

    /// Image without reducing modulo the target relations.
    pub fn apply_raw(&self, f: &Polynomial) -> Result<Polynomial> {
        self.source.ring().ensure_same(f.ring())?;
        f.substitute(&self.images, self.target.ring())
    }

    /// `φ(I)·B`, lifted to the target polynomial ring (relations included).
    pub fn extend(&self, eng: &Engine, gens: &[Polynomial]) -> Result<Ideal> {
        let imgs = gens
            .iter()
            .map(|g| self.apply(eng, g))
            .collect::<Result<Vec<_>>>()?;
        self.target.lift(&imgs)
    }
}
