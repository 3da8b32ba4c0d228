use super::complex::{differential, group_action_on_cochains, power};
use super::module::CoeffModule;
use crate::error::{input, precondition, Result};
use crate::linalg::Rat;
use crate::rack::RackTable;

fn check_len(v: &[Rat], size: usize, k: usize, degree: usize, what: &str) -> Result<()> {
    if v.len() != power(size, degree) * k {
        return input(format!(
            "{what} has {} values, expected {}",
            v.len(),
            power(size, degree) * k
        ));
    }
    Ok(())
}

/// `f_y(x_2..x_n) = f(y, x_2..x_n)`, read straight out of the value vector.
pub fn slice_first(f: &[Rat], size: usize, k: usize, degree: usize, y: usize) -> Result<Vec<Rat>> {
    if degree == 0 {
        return input("cannot slice a degree-0 cochain");
    }
    check_len(f, size, k, degree, "cochain")?;
    let block = power(size, degree - 1) * k;
    Ok(f[y * block..(y + 1) * block].to_vec())
}

/// `(f⊗g)(x_1..x_{a+b}) = f(x_1..x_a) ⊗ g(x_{a+1}..x_{a+b})`, without any
/// check on the factors. Module basis of the product is `(i, j) ↦ i*k_g + j`.
pub fn tensor_cochains(
    size: usize,
    f: &[Rat],
    a: usize,
    kf: usize,
    g: &[Rat],
    b: usize,
    kg: usize,
) -> Result<Vec<Rat>> {
    check_len(f, size, kf, a, "left factor")?;
    check_len(g, size, kg, b, "right factor")?;
    let (tf, tg) = (power(size, a), power(size, b));
    let mut out = Vec::with_capacity(tf * tg * kf * kg);
    for s in 0..tf {
        for t in 0..tg {
            for i in 0..kf {
                for j in 0..kg {
                    out.push(&f[s * kf + i] * &g[t * kg + j]);
                }
            }
        }
    }
    Ok(out)
}

pub fn is_invariant(rack: &RackTable, module: &CoeffModule, g: &[Rat], degree: usize) -> Result<bool> {
    for y in 0..rack.size() {
        if group_action_on_cochains(rack, module, degree, y)?.mul_vec(g) != g {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A cochain with its coefficient module.
#[derive(Debug, Clone)]
pub struct ProductCochain {
    pub module: CoeffModule,
    pub degree: usize,
    pub values: Vec<Rat>,
}

/// Product `C^a(X, A) × C^b_inv(X, N) → C^{a+b}(X, A ⊗ N)` for `A` with
/// trivial action and `g` invariant.
pub fn cochain_product(
    rack: &RackTable,
    a_module: &CoeffModule,
    f: &[Rat],
    a: usize,
    n_module: &CoeffModule,
    g: &[Rat],
    b: usize,
) -> Result<ProductCochain> {
    if !a_module.is_trivial_action() {
        return precondition("left factor must have coefficients with trivial action");
    }
    check_len(g, rack.size(), n_module.dim(), b, "right factor")?;
    if !is_invariant(rack, n_module, g, b)? {
        return precondition("right factor is not invariant; the Leibniz rule fails for such products");
    }
    let values = tensor_cochains(rack.size(), f, a, a_module.dim(), g, b, n_module.dim())?;
    Ok(ProductCochain {
        module: a_module.tensor(n_module)?,
        degree: a + b,
        values,
    })
}

/// `d(f⊗g) - df⊗g - (-1)^a f⊗dg`, computed for arbitrary factors.
pub fn leibniz_defect(
    rack: &RackTable,
    a_module: &CoeffModule,
    f: &[Rat],
    a: usize,
    n_module: &CoeffModule,
    g: &[Rat],
    b: usize,
) -> Result<Vec<Rat>> {
    let size = rack.size();
    let (ka, kn) = (a_module.dim(), n_module.dim());
    let prod_module = a_module.tensor(n_module)?;
    let ring = prod_module.ring();
    let fg = tensor_cochains(size, f, a, ka, g, b, kn)?;
    let d_fg = differential(rack, &prod_module, a + b)?.mul_vec(&fg);
    let df = differential(rack, a_module, a)?.mul_vec(f);
    let dg = differential(rack, n_module, b)?.mul_vec(g);
    let left = tensor_cochains(size, &df, a + 1, ka, g, b, kn)?;
    let right = tensor_cochains(size, f, a, ka, &dg, b + 1, kn)?;
    Ok(d_fg
        .iter()
        .zip(left.iter().zip(&right))
        .map(|(x, (l, r))| {
            let r = if a % 2 == 0 { r.clone() } else { ring.neg(r) };
            ring.reduce(&(x - l - r)).expect("values lie in the ring")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Ring};
    use crate::rack::{make_standard, orbits, StandardRack};
    use num_traits::Zero;

    #[test]
    fn constants_multiply() {
        let rack = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let q = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        let p = cochain_product(&rack, &q, &[rat(2)], 0, &q, &[rat(5)], 0).unwrap();
        assert_eq!((p.degree, p.values), (0, vec![rat(10)]));
    }

    #[test]
    fn orbit_indicators_multiply_to_product_indicator() {
        let rack = make_standard(&StandardRack::Conjugation(
            crate::perm::FiniteGroup::symmetric(3).unwrap(),
            None,
        ))
        .unwrap();
        let orb = orbits(&rack);
        let q = CoeffModule::trivial(Ring::Rationals, 1, 6).unwrap();
        let ind = |o: usize| -> Vec<Rat> { orb.orbit_of.iter().map(|&x| rat(i64::from(x == o))).collect() };
        let p = cochain_product(&rack, &q, &ind(1), 1, &q, &ind(2), 1).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                let expected = i64::from(orb.orbit_of[x] == 1 && orb.orbit_of[y] == 2);
                assert_eq!(p.values[x * 6 + y], rat(expected));
            }
        }
        let d2 = differential(&rack, &p.module, 2).unwrap();
        assert!(d2.mul_vec(&p.values).iter().all(Zero::is_zero));
    }

    #[test]
    fn non_invariant_factor_rejected() {
        let rack = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let q = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        let delta0 = [rat(1), rat(0), rat(0)];
        assert!(matches!(
            cochain_product(&rack, &q, &[rat(1)], 0, &q, &delta0, 1),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn slicing() {
        let f: Vec<Rat> = (0..9).map(rat).collect();
        assert_eq!(slice_first(&f, 3, 1, 2, 1).unwrap(), vec![rat(3), rat(4), rat(5)]);
        assert!(slice_first(&f, 3, 1, 0, 0).is_err());
    }
}
