use std::sync::OnceLock;

use smallvec::SmallVec;

use crate::laurent::{site_weight, TPoly};
use crate::monomial::{a_monomial, Monomial};
use crate::root::DynkinData;

use super::EngineError;

const CACHED_SITE: u32 = 24;

fn cached_site_weight(n: u32, r: u32) -> TPoly {
    static TABLE: OnceLock<Vec<Vec<TPoly>>> = OnceLock::new();
    if n > CACHED_SITE {
        return site_weight(n, r);
    }
    let table = TABLE.get_or_init(|| {
        (0..=CACHED_SITE).map(|n| (0..=n).map(|r| site_weight(n, r)).collect()).collect()
    });
    table[n as usize][r as usize].clone()
}

/// One strict term of `coeff · E_i(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub monomial: Monomial,
    /// `Σ r_a`, the depth increase.
    pub step: u32,
    pub coeff: TPoly,
}

/// `coeff · E_i(m)` without the all-`r = 0` term.
///
/// Each site `k` with `u = u_{i,k}(m) > 0` contributes the factor
/// `Σ_r t^{r(u-r)} [u r]_t A[i,k+1]^{-r}`.
pub fn expand_i(
    data: &DynkinData,
    m: &Monomial,
    node: usize,
    coeff: &TPoly,
) -> Result<Vec<Contribution>, EngineError> {
    if !m.is_i_dominant(node) {
        return Err(EngineError::NotIDominant { monomial: m.clone(), node });
    }
    let mut out = Vec::new();
    if coeff.is_zero() {
        return Ok(out);
    }
    let sites: SmallVec<[(i32, u32); 8]> =
        m.node_factors(node).iter().map(|f| (f.index, f.exp as u32)).collect();
    if sites.is_empty() {
        return Ok(out);
    }
    let a_inv: SmallVec<[Monomial; 8]> =
        sites.iter().map(|&(k, _)| a_monomial(data, node, k + 1).inverse()).collect();

    // odometer over r_a in 0..=u_a
    let mut rs: SmallVec<[u32; 8]> = SmallVec::from_elem(0, sites.len());
    loop {
        let mut pos = 0;
        loop {
            if pos == sites.len() {
                return Ok(out);
            }
            if rs[pos] < sites[pos].1 {
                rs[pos] += 1;
                break;
            }
            rs[pos] = 0;
            pos += 1;
        }
        let mut mono = m.clone();
        let mut c = coeff.clone();
        let mut step = 0;
        for (a, &r) in rs.iter().enumerate() {
            if r == 0 {
                continue;
            }
            mono = mono.mul(&a_inv[a].pow(r as i32));
            c = c.mul_ref(&cached_site_weight(sites[a].1, r));
            step += r;
        }
        out.push(Contribution { monomial: mono, step, coeff: c });
    }
}
