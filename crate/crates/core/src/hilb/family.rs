use crate::error::{Error, Result};
use crate::flat::{check_locally_free, FiniteFlatAlgebra, LocalFreeness, ModuleSection};
use crate::fraction::FractionPresentation;
use crate::ideal::{CoordinateRing, Engine, Ideal};
use crate::poly::{sylvester_resultant, Polynomial, Ring};
use crate::scalar::{Field, Scalar};

/// The universal family over `Hilb^n(A^1) = Spec k[e_1..e_n]`:
/// `k[e][x] / (x^n - e_1 x^{n-1} + ... + (-1)^n e_n)`.
#[derive(Clone, Debug)]
pub struct UnivFamilyA1 {
    n: usize,
    ambient: Ring,
    line: Ring,
    monic: Polynomial,
    algebra: FiniteFlatAlgebra,
    freeness: LocalFreeness,
}

impl UnivFamilyA1 {
    pub fn new(eng: &Engine, n: usize, field: Field) -> Result<UnivFamilyA1> {
        if n == 0 {
            return Err(Error::usage("number of points must be at least 1"));
        }
        let mut names = vec!["x".to_string()];
        names.extend((1..=n).map(|i| format!("e{i}")));
        let ambient = Ring::new(field, names)?;
        let line = Ring::new(field, ["x"])?;
        let x = Polynomial::var(&ambient, 0);
        let mut monic = x.pow(n as u32);
        for i in 1..=n {
            let term = &Polynomial::var(&ambient, i) * &x.pow((n - i) as u32);
            monic = if i % 2 == 1 {
                &monic - &term
            } else {
                &monic + &term
            };
        }
        let algebra = FiniteFlatAlgebra::from_quotient(eng, &Ideal::principal(&monic), &["x"])?;
        // A^{n+1} (basis 1, x, ..., x^n) modulo the single relation m
        let base = algebra.base().clone();
        let presentation: Vec<Vec<Polynomial>> = monic
            .coefficients_in(0)
            .iter()
            .map(|c| {
                vec![c
                    .restrict(base.ring(), &(1..=n).collect::<Vec<_>>())
                    .expect("coefficient free of x")]
            })
            .collect();
        let freeness = check_locally_free(eng, &base, &presentation, n)?;
        if !freeness.is_locally_free() {
            return Err(Error::Verification(format!(
                "universal family of degree {n} is not locally free"
            )));
        }
        Ok(UnivFamilyA1 {
            n,
            ambient,
            line,
            monic,
            algebra,
            freeness,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.ambient.field()
    }

    /// `k[x, e_1, ..., e_n]`.
    pub fn ambient(&self) -> &Ring {
        &self.ambient
    }

    /// `k[x]`, where sections of the line live.
    pub fn line(&self) -> &Ring {
        &self.line
    }

    /// `k[e_1, ..., e_n]`.
    pub fn base_ring(&self) -> &Ring {
        self.algebra.base().ring()
    }

    pub fn monic(&self) -> &Polynomial {
        &self.monic
    }

    pub fn algebra(&self) -> &FiniteFlatAlgebra {
        &self.algebra
    }

    pub fn freeness(&self) -> LocalFreeness {
        self.freeness
    }

    fn lift_section(&self, f: &Polynomial) -> Result<Polynomial> {
        let ring = f.ring();
        if ring.nvars() != 1 || ring.field() != self.field() {
            return Err(Error::usage(format!(
                "sections must be univariate over {}, got {ring}",
                self.field()
            )));
        }
        Ok(f.embed(&self.ambient, &[0]))
    }

    pub fn section(&self, eng: &Engine, f: &Polynomial) -> Result<ModuleSection> {
        self.algebra.section(eng, &self.lift_section(f)?)
    }

    /// Norm of `f`: determinant of multiplication by `f` on the universal algebra.
    pub fn norm_of_section(&self, eng: &Engine, f: &Polynomial) -> Result<Polynomial> {
        if f.is_zero() {
            return Err(Error::usage("norm of the zero section"));
        }
        self.algebra.det_section(eng, &self.section(eng, f)?)
    }

    /// `Res_x(m, f)`, an independent route to the same norm.
    pub fn norm_via_resultant(&self, f: &Polynomial) -> Result<Polynomial> {
        let res = sylvester_resultant(&self.monic, &self.lift_section(f)?, 0)?;
        let keep: Vec<usize> = (1..=self.n).collect();
        res.restrict(self.base_ring(), &keep)
            .ok_or_else(|| Error::Verification("resultant still involves x".into()))
    }

    /// Coordinates `(e_1, ..., e_n)` of a monic polynomial of degree `n`
    /// given by ascending coefficients `[c_0, ..., c_{n-1}, 1]`: `e_i = (-1)^i c_{n-i}`.
    pub fn coordinates_of_monic(&self, coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
        if coeffs.len() != self.n + 1 || !coeffs[self.n].is_one() {
            return Err(Error::usage(format!(
                "expected a monic polynomial of degree {}",
                self.n
            )));
        }
        Ok((1..=self.n)
            .map(|i| {
                let c = coeffs[self.n - i].clone();
                if i % 2 == 1 {
                    -&c
                } else {
                    c
                }
            })
            .collect())
    }

    /// Inverse of [`UnivFamilyA1::coordinates_of_monic`].
    pub fn monic_from_coordinates(&self, e: &[Scalar]) -> Vec<Scalar> {
        let mut coeffs = vec![self.field().zero(); self.n + 1];
        coeffs[self.n] = self.field().one();
        for i in 1..=self.n {
            let c = e[i - 1].clone();
            coeffs[self.n - i] = if i % 2 == 1 { -&c } else { c };
        }
        coeffs
    }
}

/// `N^{-1} Hilb^n(A^1)`: the base `k[e]` with the norms of the given sections inverted.
#[derive(Clone, Debug)]
pub struct LocalizedHilb {
    pub family: UnivFamilyA1,
    pub sections: Vec<Polynomial>,
    pub norms: Vec<Polynomial>,
    pub presentation: FractionPresentation,
}

impl LocalizedHilb {
    pub fn new(
        eng: &Engine,
        n: usize,
        field: Field,
        sections: &[Polynomial],
    ) -> Result<LocalizedHilb> {
        let family = UnivFamilyA1::new(eng, n, field)?;
        let mut norms = Vec::with_capacity(sections.len());
        for s in sections {
            norms.push(family.norm_of_section(eng, s)?);
        }
        let base = CoordinateRing::polynomial(family.base_ring());
        let labels: Vec<String> = sections.iter().map(|s| format!("N({s})")).collect();
        let pairs: Vec<(&str, Polynomial)> = labels
            .iter()
            .map(String::as_str)
            .zip(norms.iter().cloned())
            .collect();
        let presentation = FractionPresentation::free(eng, &base, &pairs)?;
        Ok(LocalizedHilb {
            family,
            sections: sections.to_vec(),
            norms,
            presentation,
        })
    }
}
