use num_complex::Complex64;

use super::{ComplexMatrix, GridError, PowerNetwork};

/// Bus admittance in per unit; row and column k belong to `bus_ids[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceMatrix {
    pub bus_ids: Vec<u32>,
    pub matrix: ComplexMatrix,
}

impl AdmittanceMatrix {
    pub fn get(&self, from: u32, to: u32) -> Option<Complex64> {
        let f = self.bus_ids.iter().position(|&b| b == from)?;
        let t = self.bus_ids.iter().position(|&b| b == to)?;
        Some(self.matrix[(f, t)])
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.matrix.max_abs_diff(&self.matrix.transpose()) <= tol
    }
}

/// π-model assembly with off-nominal taps and phase shifters on the from side.
pub fn build_admittance(net: &PowerNetwork) -> Result<AdmittanceMatrix, GridError> {
    let n = net.n_buses();
    let mut y = ComplexMatrix::zeros(n, n);
    for br in net.branches().iter().filter(|b| b.in_service) {
        if br.r == 0.0 && br.x == 0.0 {
            return Err(GridError::ZeroImpedanceBranch {
                from: br.from,
                to: br.to,
            });
        }
        let f = net.bus_index(br.from).expect("validated network");
        let t = net.bus_index(br.to).expect("validated network");
        let series = Complex64::new(br.r, br.x).inv();
        let charging = Complex64::new(0.0, br.b / 2.0);
        let tau = if br.ratio == 0.0 { 1.0 } else { br.ratio };
        let tap = Complex64::from_polar(tau, br.angle.to_radians());
        y[(f, f)] += (series + charging) / (tau * tau);
        y[(t, t)] += series + charging;
        y[(f, t)] -= series / tap.conj();
        y[(t, f)] -= series / tap;
    }
    for (k, bus) in net.buses().iter().enumerate() {
        y[(k, k)] += Complex64::new(bus.gs, bus.bs) / net.base_mva();
    }
    Ok(AdmittanceMatrix {
        bus_ids: net.buses().iter().map(|b| b.id).collect(),
        matrix: y,
    })
}
