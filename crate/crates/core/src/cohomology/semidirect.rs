use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cochain::{differential, CoeffModule};
use crate::error::{input, precondition, Result};
use crate::linalg::{Rat, Ring};
use crate::rack::{index_of, make_semidirect, row_times, vector_of, RackTable};

/// For `ω: X → N` (values stored element by element), decides separately
/// whether `x ↦ (x, ω(x)·x⁻¹)` is a rack homomorphism `X → X ⋉ N` and
/// whether `dω = 0`. Returns `(is_rack_hom, is_cocycle)`.
pub fn semidirect_cocycle_check(rack: &RackTable, module: &CoeffModule, omega: &[Rat]) -> Result<(bool, bool)> {
    let semi = make_semidirect(rack, module)?;
    Ok((
        lift_is_hom(rack, &semi, module, omega)?,
        is_cocycle(rack, module, omega)?,
    ))
}

fn lift_is_hom(rack: &RackTable, semi: &RackTable, module: &CoeffModule, omega: &[Rat]) -> Result<bool> {
    let Ring::PrimeField(p) = module.ring() else {
        return precondition("semidirect check needs a module over a finite field");
    };
    let (n, k) = (rack.size(), module.dim());
    if omega.len() != n * k {
        return input(format!("function has {} values, expected {}", omega.len(), n * k));
    }
    let fiber = semi.size() / n;
    let lift: Vec<usize> = (0..n)
        .map(|x| {
            let v: Vec<Rat> = omega[x * k..(x + 1) * k]
                .iter()
                .map(|c| module.ring().reduce(c))
                .collect::<Result<_>>()?;
            Ok(x * fiber + index_of(&row_times(module.ring(), &v, module.inverse_action(x)), p))
        })
        .collect::<Result<_>>()?;
    Ok((0..n).all(|x| (0..n).all(|y| lift[rack.op(x, y)] == semi.op(lift[x], lift[y]))))
}

fn is_cocycle(rack: &RackTable, module: &CoeffModule, omega: &[Rat]) -> Result<bool> {
    let reduced: Vec<Rat> = omega.iter().map(|c| module.ring().reduce(c)).collect::<Result<_>>()?;
    Ok(differential(rack, module, 1)?
        .mul_vec(&reduced)
        .iter()
        .all(Zero::is_zero))
}

/// Outcome of running the check on every function `X → N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectScan {
    pub functions: usize,
    pub agreements: usize,
    pub cocycles: usize,
}

/// Exhaustive scan over all `p^(k|X|)` functions.
pub fn semidirect_scan(rack: &RackTable, module: &CoeffModule, cap: u64) -> Result<SemidirectScan> {
    let Ring::PrimeField(p) = module.ring() else {
        return precondition("semidirect scan needs a module over a finite field");
    };
    let len = rack.size() * module.dim();
    let total = p
        .checked_pow(len as u32)
        .filter(|&t| t <= cap)
        .ok_or_else(|| crate::Error::Resource(format!("{p}^{len} functions exceed the enumeration cap {cap}")))?;
    let semi = make_semidirect(rack, module)?;
    let mut scan = SemidirectScan {
        functions: 0,
        agreements: 0,
        cocycles: 0,
    };
    for code in 0..total as usize {
        let omega: Vec<Rat> = vector_of(code, p, len)
            .into_iter()
            .map(|c| Rat::from_integer(c.into()))
            .collect();
        let hom = lift_is_hom(rack, &semi, module, &omega)?;
        let cocycle = is_cocycle(rack, module, &omega)?;
        scan.functions += 1;
        scan.agreements += usize::from(hom == cocycle);
        scan.cocycles += usize::from(cocycle);
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, DenseMatrix};
    use crate::rack::{make_standard, StandardRack};

    fn setup() -> (RackTable, CoeffModule) {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let f3 = Ring::PrimeField(3);
        let minus = DenseMatrix::scalar(f3, 1, &f3.reduce(&rat(-1)).unwrap()).unwrap();
        (d3.clone(), CoeffModule::same_operator(&d3, minus).unwrap())
    }

    #[test]
    fn zero_and_coboundary() {
        let (d3, m) = setup();
        assert_eq!(
            semidirect_cocycle_check(&d3, &m, &vec![rat(0); 3]).unwrap(),
            (true, true)
        );
        // v·x - v with v = 1 and x acting by -1
        assert_eq!(
            semidirect_cocycle_check(&d3, &m, &vec![rat(-2); 3]).unwrap(),
            (true, true)
        );
    }

    #[test]
    fn exhaustive_agreement() {
        let (d3, m) = setup();
        let scan = semidirect_scan(&d3, &m, 1000).unwrap();
        assert_eq!(scan.functions, 27);
        assert_eq!(scan.agreements, 27);
        assert!(scan.cocycles > 1 && scan.cocycles < 27);
    }
}
