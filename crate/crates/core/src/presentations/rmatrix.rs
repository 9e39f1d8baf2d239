use crate::coeff::{Field, Scalar};

/// Dense square matrix over a field, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zero(n: usize) -> Self {
        DenseMatrix { n, data: vec![F::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "not square");
        DenseMatrix { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// 0-based entry.
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j].add_mul_assign(a, &rhs.data[k * n + j]);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        DenseMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect() }
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.n, rhs.n);
        let mut out = Self::zero(n * m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, self.get(i, j).mul(rhs.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            for j in 0..n {
                a.data.swap(c * n + j, p * n + j);
                inv.data.swap(c * n + j, p * n + j);
            }
            let piv = a.get(c, c).inv()?;
            for j in 0..n {
                a.data[c * n + j] = a.data[c * n + j].mul(&piv);
                inv.data[c * n + j] = inv.data[c * n + j].mul(&piv);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let (x, y) = (a.data[c * n + j].mul(&f), inv.data[c * n + j].mul(&f));
                    a.data[r * n + j] = a.data[r * n + j].sub(&x);
                    inv.data[r * n + j] = inv.data[r * n + j].sub(&y);
                }
            }
        }
        Some(inv)
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }
}

/// The flip `P` on `V (x) V`, basis `e_i (x) e_j` at index `2i + j`.
pub fn flip() -> DenseMatrix<Scalar> {
    let mut p = DenseMatrix::zero(4);
    for i in 0..2 {
        for j in 0..2 {
            p.set(2 * i + j, 2 * j + i, Scalar::one());
        }
    }
    p
}

/// The R-matrix of the standard representation of `U_q(sl2)` on `V (x) V`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix(DenseMatrix<Scalar>);

/// `q^{-1/2} [[q,0,0,0],[0,1,0,0],[0,q-q^-1,1,0],[0,0,0,q]]`; `q^{1/2} = s`.
pub fn rmatrix() -> RMatrix {
    let q = Scalar::q();
    let z = Scalar::zero();
    let one = Scalar::one();
    let rows = vec![
        vec![q.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![z.clone(), &q - &Scalar::q_pow(-1), one, z.clone()],
        vec![z.clone(), z.clone(), z, q],
    ];
    let k = Scalar::s_pow(-1);
    let rows = rows.into_iter().map(|r| r.into_iter().map(|x| &x * &k).collect()).collect();
    RMatrix(DenseMatrix::from_rows(rows))
}

impl RMatrix {
    /// 1-based entry, matching the displayed matrix.
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.0.get(i - 1, j - 1)
    }

    pub fn matrix(&self) -> &DenseMatrix<Scalar> {
        &self.0
    }

    /// `R_21 = P R P`.
    pub fn r21(&self) -> DenseMatrix<Scalar> {
        let p = flip();
        p.mul(&self.0).mul(&p)
    }

    /// Components of `R12 R13 R23 - R23 R13 R12` on `V^(x)3`.
    pub fn yang_baxter_residual(&self) -> Vec<Scalar> {
        let id = DenseMatrix::<Scalar>::identity(2);
        let r12 = self.0.kron(&id);
        let r23 = id.kron(&self.0);
        let p23 = id.kron(&flip());
        let r13 = p23.mul(&r12).mul(&p23);
        let lhs = r12.mul(&r13).mul(&r23);
        let rhs = r23.mul(&r13).mul(&r12);
        lhs.sub(&rhs).entries().to_vec()
    }
}
