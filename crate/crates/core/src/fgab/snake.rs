use super::group::{FgGroup, Homomorphism, Quotient};
use super::lattice::Lattice;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;

/// `0 → A --i--> B --p--> C → 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub i: Homomorphism,
    pub p: Homomorphism,
}

impl ShortExact {
    pub fn new(i: Homomorphism, p: Homomorphism) -> Self {
        ShortExact { i, p }
    }

    /// Checks injectivity, exactness in the middle and surjectivity.
    pub fn verify(&self, name: &str) -> Result<()> {
        let fail = |at: &str, detail: &str| {
            Err(Error::Diagram {
                position: format!("{name} row at {at}"),
                detail: detail.to_string(),
            })
        };
        if self.i.target() != self.p.source() {
            return fail("B", "maps do not compose");
        }
        if self.i.kernel_lattice() != self.i.source().relations() {
            return fail("A", "first map is not injective");
        }
        if self.p.kernel_lattice() != self.i.image_lattice() {
            return fail("B", "kernel of the second map differs from the image of the first");
        }
        if self.p.image_lattice() != Lattice::standard(self.p.target().ngens()) {
            return fail("C", "second map is not surjective");
        }
        Ok(())
    }
}

/// Two short exact rows joined by vertical maps `a: A → A'`, `b: B → B'`, `c: C → C'`.
#[derive(Clone, Debug)]
pub struct SnakeDiagram {
    pub top: ShortExact,
    pub bottom: ShortExact,
    pub a: Homomorphism,
    pub b: Homomorphism,
    pub c: Homomorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub positions: Vec<(String, bool)>,
}

impl ExactnessReport {
    pub fn all_pass(&self) -> bool {
        self.positions.iter().all(|(_, ok)| *ok)
    }
}

/// The six-term sequence `ker a → ker b → ker c → coker a → coker b → coker c`.
#[derive(Clone, Debug)]
pub struct SnakeResult {
    pub delta: Homomorphism,
    pub groups: [Quotient; 6],
    /// The five consecutive maps, `delta` being the third.
    pub maps: [Homomorphism; 5],
    pub report: ExactnessReport,
}

fn exact_at(f: &Homomorphism, g: &Homomorphism) -> bool {
    g.kernel_lattice() == f.image_lattice()
}

pub fn connecting_hom(d: &SnakeDiagram) -> Result<SnakeResult> {
    d.top.verify("top")?;
    d.bottom.verify("bottom")?;
    let pairs = [
        ("a source", d.a.source(), d.top.i.source()),
        ("a target", d.a.target(), d.bottom.i.source()),
        ("b source", d.b.source(), d.top.i.target()),
        ("b target", d.b.target(), d.bottom.i.target()),
        ("c source", d.c.source(), d.top.p.target()),
        ("c target", d.c.target(), d.bottom.p.target()),
    ];
    for (pos, x, y) in pairs {
        if x != y {
            return Err(Error::Diagram {
                position: pos.into(),
                detail: format!("{x} vs {y}"),
            });
        }
    }
    if d.b.compose(&d.top.i)? != d.bottom.i.compose(&d.a)? {
        return Err(Error::Diagram {
            position: "left square".into(),
            detail: "b∘i differs from i'∘a".into(),
        });
    }
    if d.c.compose(&d.top.p)? != d.bottom.p.compose(&d.b)? {
        return Err(Error::Diagram {
            position: "right square".into(),
            detail: "c∘p differs from p'∘b".into(),
        });
    }
    let ker = |h: &Homomorphism| Quotient::new(&h.kernel_lattice(), &h.source().relations());
    let coker = |h: &Homomorphism| Quotient::new(&Lattice::standard(h.target().ngens()), &h.image_lattice());
    let (ka, kb, kc) = (ker(&d.a)?, ker(&d.b)?, ker(&d.c)?);
    let (qa, qb, qc) = (coker(&d.a)?, coker(&d.b)?, coker(&d.c)?);

    let m1 = ka.induced(&kb, d.top.i.matrix())?;
    let m2 = kb.induced(&kc, d.top.p.matrix())?;
    let c_group: &FgGroup = d.c.source();
    let cols = kc
        .lifts()
        .iter()
        .map(|z| -> Result<Vec<BigInt>> {
            let y = d.top.p.preimage(&c_group.reduce(z))?.ok_or_else(|| Error::Diagram {
                position: "top row at C".into(),
                detail: "no preimage".into(),
            })?;
            let w = d.b.apply(&y)?;
            let x = d.bottom.i.preimage(&w)?.ok_or_else(|| Error::Diagram {
                position: "bottom row at B'".into(),
                detail: "image of a kernel lift is not in the image of i'".into(),
            })?;
            qa.project(&x)
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = Homomorphism::new(
        kc.group.clone(),
        qa.group.clone(),
        super::IntMatrix::from_cols(cols, qa.group.ngens())?,
    )?;
    let m4 = qa.induced(&qb, d.bottom.i.matrix())?;
    let m5 = qb.induced(&qc, d.bottom.p.matrix())?;

    let positions = vec![
        ("ker a".to_string(), m1.kernel_lattice() == m1.source().relations()),
        ("ker b".to_string(), exact_at(&m1, &m2)),
        ("ker c".to_string(), exact_at(&m2, &delta)),
        ("coker a".to_string(), exact_at(&delta, &m4)),
        ("coker b".to_string(), exact_at(&m4, &m5)),
        (
            "coker c".to_string(),
            m5.image_lattice() == Lattice::standard(m5.target().ngens()),
        ),
    ];
    Ok(SnakeResult {
        delta: delta.clone(),
        groups: [ka, kb, kc, qa, qb, qc],
        maps: [m1, m2, delta, m4, m5],
        report: ExactnessReport { positions },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::IntMatrix;

    fn z() -> FgGroup {
        FgGroup::free(1)
    }

    fn row_times_two() -> ShortExact {
        let i = Homomorphism::scalar(&z(), 2);
        let p = Homomorphism::new(z(), FgGroup::cyclic(2), IntMatrix::from_i64(&[[1]])).unwrap();
        ShortExact::new(i, p)
    }

    #[test]
    fn identity_diagram_has_zero_delta() {
        let row = row_times_two();
        let d = SnakeDiagram {
            a: Homomorphism::identity(&z()),
            b: Homomorphism::identity(&z()),
            c: Homomorphism::identity(&FgGroup::cyclic(2)),
            top: row.clone(),
            bottom: row,
        };
        let r = connecting_hom(&d).unwrap();
        assert!(r.delta.is_zero());
        assert!(r.report.all_pass());
    }

    #[test]
    fn times_two_diagram() {
        let row = row_times_two();
        let d = SnakeDiagram {
            a: Homomorphism::zero(&z(), &z()),
            b: Homomorphism::scalar(&z(), 2),
            c: Homomorphism::zero(&FgGroup::cyclic(2), &FgGroup::cyclic(2)),
            top: row.clone(),
            bottom: row,
        };
        assert!(connecting_hom(&d).is_err(), "b∘i = 4 but i'∘a = 0");
    }

    #[test]
    fn multiplication_by_two_on_the_row() {
        let row = row_times_two();
        let d = SnakeDiagram {
            a: Homomorphism::scalar(&z(), 2),
            b: Homomorphism::scalar(&z(), 2),
            c: Homomorphism::scalar(&FgGroup::cyclic(2), 2),
            top: row.clone(),
            bottom: row,
        };
        let r = connecting_hom(&d).unwrap();
        assert_eq!(r.delta.source(), &FgGroup::cyclic(2));
        assert_eq!(r.delta.target(), &FgGroup::cyclic(2));
        assert!(!r.delta.is_zero());
        assert!(r.report.all_pass());
    }

    #[test]
    fn non_commuting_square_is_named() {
        let row = row_times_two();
        let d = SnakeDiagram {
            a: Homomorphism::identity(&z()),
            b: Homomorphism::scalar(&z(), 3),
            c: Homomorphism::identity(&FgGroup::cyclic(2)),
            top: row.clone(),
            bottom: row,
        };
        match connecting_hom(&d) {
            Err(Error::Diagram { position, .. }) => assert_eq!(position, "left square"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
