//! Shared fixtures: the corpus, coefficient modules, and one randomized
//! instance of the structural identities of the cochain complex.
#![allow(dead_code)]

use num_traits::Zero;
use rackoh_core::cochain::{
    chain_iso_t, cochain_dim, differential, differential_prime, group_action_on_cochains, leibniz_defect, projector_p,
    slice_first, CoeffModule,
};
use rackoh_core::cohomology::class_fixed_by_action;
use rackoh_core::corpus::{builtin_corpus, parse_rack_spec};
use rackoh_core::linalg::{rat, ExactMatrix, Rat, Ring};
use rackoh_core::RackTable;
use rand::rngs::StdRng;
use rand::Rng;

pub fn corpus() -> Vec<(String, RackTable)> {
    builtin_corpus()
        .into_iter()
        .map(|s| (s.clone(), parse_rack_spec(&s).unwrap()))
        .collect()
}

/// Coefficient modules exercised by the structural suite.
pub fn modules(rack: &RackTable) -> Vec<(&'static str, CoeffModule)> {
    let n = rack.size();
    vec![
        ("trivial Q", CoeffModule::trivial(Ring::Rationals, 1, n).unwrap()),
        ("Fun(X,Q)", CoeffModule::functions(rack, Ring::Rationals).unwrap()),
        (
            "jordan t=2 k=2",
            CoeffModule::jordan(Ring::Rationals, n, &rat(2), 2).unwrap(),
        ),
        ("trivial F5^2", CoeffModule::trivial(Ring::PrimeField(5), 2, n).unwrap()),
        ("Fun(X,F3)", CoeffModule::functions(rack, Ring::PrimeField(3)).unwrap()),
    ]
}

pub fn random_vec(rng: &mut StdRng, ring: Ring, len: usize) -> Vec<Rat> {
    (0..len)
        .map(|_| ring.reduce(&rat(rng.gen_range(-3..=3))).unwrap())
        .collect()
}

pub fn sub(ring: Ring, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn is_zero(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Precomputed maps for one (rack, module) pair up to degree `top`.
pub struct Context {
    pub rack: RackTable,
    pub module: CoeffModule,
    pub top: usize,
    pub d: Vec<ExactMatrix>,
    pub d_prime: Vec<ExactMatrix>,
    pub t: Vec<ExactMatrix>,
    /// `action[n][y]` acts on `C^n`.
    pub action: Vec<Vec<ExactMatrix>>,
    pub cocycles: Vec<Vec<Vec<Rat>>>,
}

impl Context {
    /// Highest `top` with `|X|^(top+2) k` at most `limit`, so that
    /// `d^{top+1}` stays small.
    pub fn new(rack: &RackTable, module: &CoeffModule, limit: usize) -> Context {
        let (size, k) = (rack.size(), module.dim());
        let mut top = 0;
        while size.pow(top as u32 + 3) * k <= limit && top < 3 {
            top += 1;
        }
        let d: Vec<_> = (0..=top + 1).map(|n| differential(rack, module, n).unwrap()).collect();
        let d_prime = (0..=top + 1)
            .map(|n| differential_prime(rack, module, n).unwrap())
            .collect();
        let t = (0..=top + 2).map(|n| chain_iso_t(rack, module, n).unwrap()).collect();
        let action = (0..=top + 1)
            .map(|n| {
                (0..size)
                    .map(|y| group_action_on_cochains(rack, module, n, y).unwrap())
                    .collect()
            })
            .collect();
        let cocycles = (0..=top).map(|n| d[n].kernel_basis().unwrap()).collect();
        Context {
            rack: rack.clone(),
            module: module.clone(),
            top,
            d,
            d_prime,
            t,
            action,
            cocycles,
        }
    }

    fn ring(&self) -> Ring {
        self.module.ring()
    }
}

/// One random instance of every identity; `Err` names the one that broke.
pub fn check_instance(ctx: &Context, rng: &mut StdRng) -> Result<(), String> {
    let ring = ctx.ring();
    let (size, k) = (ctx.rack.size(), ctx.module.dim());
    let n = rng.gen_range(0..=ctx.top);
    let y = rng.gen_range(0..size);
    let f = random_vec(rng, ring, cochain_dim(&ctx.rack, &ctx.module, n));
    let df = ctx.d[n].mul_vec(&f);

    if !is_zero(&ctx.d[n + 1].mul_vec(&df)) {
        return Err(format!("d∘d ≠ 0 at degree {n}"));
    }
    if !is_zero(&ctx.d_prime[n + 1].mul_vec(&ctx.d_prime[n].mul_vec(&f))) {
        return Err(format!("d'∘d' ≠ 0 at degree {n}"));
    }
    if ctx.t[n + 1].mul_vec(&df) != ctx.d_prime[n].mul_vec(&ctx.t[n].mul_vec(&f)) {
        return Err(format!("T d ≠ d' T at degree {n}"));
    }
    let fy = ctx.action[n][y].mul_vec(&f);
    if ctx.d[n].mul_vec(&fy) != ctx.action[n + 1][y].mul_vec(&df) {
        return Err(format!("action does not commute with d at degree {n}, y = {y}"));
    }
    if n >= 1 {
        // d(f_y) = (f - f·y) - (df)_y
        let left = ctx.d[n - 1].mul_vec(&slice_first(&f, size, k, n, y).unwrap());
        let right = sub(ring, &sub(ring, &f, &fy), &slice_first(&df, size, k, n + 1, y).unwrap());
        if left != right {
            return Err(format!("slice identity fails at degree {n}, y = {y}"));
        }
    }
    let basis = &ctx.cocycles[n];
    if !basis.is_empty() {
        let coeffs = random_vec(rng, ring, basis.len());
        let mut z = vec![Rat::zero(); basis[0].len()];
        for (c, b) in coeffs.iter().zip(basis) {
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi = ring.add(zi, &ring.mul(c, bi));
            }
        }
        if !class_fixed_by_action(&ctx.rack, &ctx.module, n, &z, y).map_err(|e| e.to_string())? {
            return Err(format!("class of a degree-{n} cocycle moved by y = {y}"));
        }
    }
    Ok(())
}

/// Leibniz rule for `f ⊗ g` with trivial left coefficients and an
/// invariant right factor, degrees `a + b ≤ 2`.
pub fn check_leibniz(rack: &RackTable, n_module: &CoeffModule, rng: &mut StdRng) -> Result<(), String> {
    let ring = n_module.ring();
    let a_module = CoeffModule::trivial(ring, 1, rack.size()).unwrap();
    let a = rng.gen_range(0..=1);
    let b = rng.gen_range(0..=2 - a);
    let f = random_vec(rng, ring, cochain_dim(rack, &a_module, a));
    let p = projector_p(rack, n_module, b, 100_000).map_err(|e| e.to_string())?;
    let g = p.mul_vec(&random_vec(rng, ring, cochain_dim(rack, n_module, b)));
    let defect = leibniz_defect(rack, &a_module, &f, a, n_module, &g, b).unwrap();
    if is_zero(&defect) {
        Ok(())
    } else {
        Err(format!("Leibniz rule fails for degrees ({a}, {b})"))
    }
}
