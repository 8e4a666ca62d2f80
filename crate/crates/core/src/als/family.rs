use crate::error::{Error, Result};
use crate::nfq::Field;
use crate::real::Real;

use super::{l2_system, standard_system, AdelicLipschitzSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Standard,
    L2,
}

/// One system per field of degree at most 2, with constants dominating
/// every member.
#[derive(Clone, Debug)]
pub struct UniformSystemFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

/// Uniform `(C, M, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformConstants {
    pub c: Real,
    pub m: u32,
    pub l: Real,
}

impl UniformSystemFamily {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        UniformSystemFamily { kind, n }
    }

    pub fn member(&self, field: &Field) -> AdelicLipschitzSystem {
        match self.kind {
            FamilyKind::Standard => standard_system(field, self.n),
            FamilyKind::L2 => l2_system(field, self.n),
        }
    }

    pub fn constants(&self, prec: u32) -> UniformConstants {
        let n = self.n as i64;
        match self.kind {
            FamilyKind::Standard => UniformConstants {
                c: Real::one(),
                m: 2 * self.n as u32 + 2,
                l: (&(&Real::pi(prec) * &Real::from_int(2)) * &Real::from_int(2 * n + 1).sqrt(prec))
                    .round(prec),
            },
            FamilyKind::L2 => {
                let m = Real::from_int(n + 1);
                UniformConstants {
                    c: Real::one(),
                    m: 1,
                    l: (&(&Real::from_int(32) * &m.powi(2)) * &m.sqrt(prec)).round(prec),
                }
            }
        }
    }

    /// Checks that the member over `field` is dominated by the family
    /// constants.
    pub fn certify(&self, field: &Field, prec: u32) -> Result<()> {
        let sys = self.member(field);
        let fam = self.constants(prec);
        let c = sys.c(prec)?;
        let l = sys.l_n(prec)?;
        let ok = c.certainly_le(&fam.c) && sys.m_n() <= fam.m && !fam.l.certainly_lt(&l);
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "member over {field} exceeds the family constants"
            )))
        }
    }

    /// Constants chosen for the member over `field`: a member may always
    /// take the family bounds once they dominate its own.
    pub fn associated_constants(&self, field: &Field, prec: u32) -> Result<UniformConstants> {
        self.certify(field, prec)?;
        Ok(self.constants(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fundamental_discriminants;
    use crate::arith::squarefree_of_discriminant;

    #[test]
    fn standard_family_over_quadratic_fields() {
        for n in 1..4 {
            let fam = UniformSystemFamily::new(FamilyKind::Standard, n);
            let k = fam.constants(64);
            for disc in fundamental_discriminants(200) {
                let f = Field::quadratic(squarefree_of_discriminant(disc).unwrap()).unwrap();
                assert_eq!(fam.associated_constants(&f, 64).unwrap(), k);
            }
            let real = fam.member(&Field::quadratic(2).unwrap());
            assert_eq!(real.m_n(), k.m);
            let imag = fam.member(&Field::quadratic(-1).unwrap());
            assert!(imag.l_n(64).unwrap().overlaps(&k.l));
            UniformSystemFamily::new(FamilyKind::L2, n)
                .certify(&Field::quadratic(-7).unwrap(), 64)
                .unwrap();
        }
    }
}
