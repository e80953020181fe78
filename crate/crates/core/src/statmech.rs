//! Classical equilibrium cross-check of the kinetic result: thermal
//! wavelengths, fugacities, Maxwell-Boltzmann concentrations and the
//! cross-section ratios implied by detailed balance.

use crate::error::{ensure_positive, KineticsError, Result};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B_SI: f64 = 1.380_649e-23;

/// Largest `mu / kT` whose exponential is still comfortably finite.
pub const MAX_FUGACITY_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoSpecies {
    pub mass: f64,
    /// Number of internal states (spin, isospin, ...).
    pub degeneracy: u32,
    pub chem_potential: f64,
}

impl ThermoSpecies {
    pub fn new(mass: f64, degeneracy: u32, chem_potential: f64) -> Result<Self> {
        let sp = Self {
            mass,
            degeneracy,
            chem_potential,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("mass", self.mass)?;
        if self.degeneracy == 0 {
            return Err(KineticsError::InvalidDegeneracy);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoContext {
    pub temperature: f64,
    pub hbar: f64,
    pub k_b: f64,
    pub natural_units: bool,
}

impl ThermoContext {
    /// SI constants at temperature `t` (kelvin).
    pub fn si(temperature: f64) -> Result<Self> {
        ensure_positive("temperature", temperature)?;
        Ok(Self {
            temperature,
            hbar: HBAR_SI,
            k_b: K_B_SI,
            natural_units: false,
        })
    }

    /// `hbar = k_B = 1`.
    pub fn natural(temperature: f64) -> Result<Self> {
        ensure_positive("temperature", temperature)?;
        Ok(Self {
            temperature,
            hbar: 1.0,
            k_b: 1.0,
            natural_units: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("temperature", self.temperature)?;
        ensure_positive("hbar", self.hbar)?;
        ensure_positive("k_B", self.k_b)?;
        Ok(())
    }

    #[inline]
    pub fn kt(&self) -> f64 {
        self.k_b * self.temperature
    }
}

/// Species `A, B, C, D` of `A + B <-> C + D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartet {
    pub a: ThermoSpecies,
    pub b: ThermoSpecies,
    pub c: ThermoSpecies,
    pub d: ThermoSpecies,
}

impl Quartet {
    pub fn new(a: ThermoSpecies, b: ThermoSpecies, c: ThermoSpecies, d: ThermoSpecies) -> Result<Self> {
        let q = Self { a, b, c, d };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        self.species().iter().try_for_each(ThermoSpecies::validate)
    }

    pub fn species(&self) -> [ThermoSpecies; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `g_C g_D / (g_A g_B)`.
    fn degeneracy_ratio(&self) -> f64 {
        (f64::from(self.c.degeneracy) * f64::from(self.d.degeneracy))
            / (f64::from(self.a.degeneracy) * f64::from(self.b.degeneracy))
    }

    /// `m_C m_D / (m_A m_B)`.
    fn mass_ratio(&self) -> f64 {
        (self.c.mass / self.a.mass) * (self.d.mass / self.b.mass)
    }
}

/// Mean speeds of all four species plus both cross-sections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticQuartet {
    /// `v_A, v_B, v_C, v_D`.
    pub speeds: [f64; 4],
    pub sigma_fwd: f64,
    pub sigma_bwd: f64,
}

impl KineticQuartet {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in ["v_A", "v_B", "v_C", "v_D"].into_iter().zip(self.speeds) {
            ensure_positive(name, v)?;
        }
        ensure_positive("sigma_fwd", self.sigma_fwd)?;
        ensure_positive("sigma_bwd", self.sigma_bwd)?;
        Ok(())
    }

    /// Speeds from equipartition at the context temperature.
    pub fn equipartition(
        quartet: &Quartet,
        ctx: &ThermoContext,
        sigma_fwd: f64,
        sigma_bwd: f64,
    ) -> Result<Self> {
        let mut speeds = [0.0; 4];
        for (v, sp) in speeds.iter_mut().zip(quartet.species()) {
            *v = equipartition_speed(sp.mass, ctx)?;
        }
        let kq = Self {
            speeds,
            sigma_fwd,
            sigma_bwd,
        };
        kq.validate()?;
        Ok(kq)
    }
}

/// de Broglie thermal wavelength `hbar sqrt(2 pi / (m k T))`.
pub fn thermal_wavelength(sp: &ThermoSpecies, ctx: &ThermoContext) -> Result<f64> {
    sp.validate()?;
    ctx.validate()?;
    Ok(ctx.hbar * (2.0 * std::f64::consts::PI / (sp.mass * ctx.kt())).sqrt())
}

/// `exp(mu / kT)`.
pub fn fugacity(mu: f64, ctx: &ThermoContext) -> Result<f64> {
    ctx.validate()?;
    let exponent = mu / ctx.kt();
    if exponent > MAX_FUGACITY_EXPONENT || exponent.is_nan() {
        return Err(KineticsError::FugacityOverflow(exponent));
    }
    Ok(exponent.exp())
}

/// Classical number density `g z / lambda^3`.
pub fn classical_concentration(sp: &ThermoSpecies, ctx: &ThermoContext) -> Result<f64> {
    let lambda = thermal_wavelength(sp, ctx)?;
    Ok(f64::from(sp.degeneracy) * fugacity(sp.chem_potential, ctx)? / lambda.powi(3))
}

/// `sqrt(3 k T / m)`.
pub fn equipartition_speed(mass: f64, ctx: &ThermoContext) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ctx.validate()?;
    Ok((3.0 * ctx.kt() / mass).sqrt())
}

/// `(mu_A + mu_B - mu_C - mu_D) / kT`; zero at chemical equilibrium.
pub fn chemical_potential_gap(quartet: &Quartet, ctx: &ThermoContext) -> Result<f64> {
    ctx.validate()?;
    let q = quartet;
    Ok((q.a.chem_potential + q.b.chem_potential - q.c.chem_potential - q.d.chem_potential) / ctx.kt())
}

/// Relative mismatch between the two sides of the detailed-balance
/// relation with caller-supplied speeds:
///
/// `(g_C g_D / g_A g_B) (m_C m_D / m_A m_B)^(3/2)` versus
/// `sqrt(v_A v_B / (v_C v_D)) sigma_fwd / sigma_bwd`.
///
/// Returns `|lhs - rhs| / max(|lhs|, |rhs|)`.
pub fn detailed_balance_residual(quartet: &Quartet, kinetic: &KineticQuartet) -> Result<f64> {
    quartet.validate()?;
    kinetic.validate()?;
    let lhs = quartet.degeneracy_ratio() * quartet.mass_ratio().powf(1.5);
    let [va, vb, vc, vd] = kinetic.speeds;
    let rhs = ((va / vc) * (vb / vd)).sqrt() * (kinetic.sigma_fwd / kinetic.sigma_bwd);
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()))
}

/// Cross-section ratio `sigma_fwd / sigma_bwd` that zeroes
/// [`detailed_balance_residual`] for the given speeds `v_A, v_B, v_C, v_D`.
pub fn balanced_sigma_ratio(quartet: &Quartet, speeds: [f64; 4]) -> Result<f64> {
    quartet.validate()?;
    for (name, v) in ["v_A", "v_B", "v_C", "v_D"].into_iter().zip(speeds) {
        ensure_positive(name, v)?;
    }
    let [va, vb, vc, vd] = speeds;
    Ok(quartet.degeneracy_ratio() * quartet.mass_ratio().powf(1.5) / ((va / vc) * (vb / vd)).sqrt())
}

/// Cross-section ratio `sigma_fwd / sigma_bwd` required by detailed balance
/// once speeds follow equipartition:
/// `(g_C g_D / g_A g_B) (m_C m_D / m_A m_B)^(5/4)`.
pub fn predicted_sigma_ratio(quartet: &Quartet) -> Result<f64> {
    quartet.validate()?;
    Ok(quartet.degeneracy_ratio() * quartet.mass_ratio().powf(1.25))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(mass: f64, g: u32) -> ThermoSpecies {
        ThermoSpecies::new(mass, g, 0.0).unwrap()
    }

    fn symmetric() -> Quartet {
        Quartet::new(sp(1.0, 1), sp(2.0, 2), sp(1.0, 1), sp(2.0, 2)).unwrap()
    }

    #[test]
    fn wavelength() {
        let nat = ThermoContext::natural(1.0).unwrap();
        assert_relative_eq!(
            thermal_wavelength(&sp(2.0 * std::f64::consts::PI, 1), &nat).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let l1 = thermal_wavelength(&sp(3.0, 1), &nat).unwrap();
        let l4 = thermal_wavelength(&sp(12.0, 1), &nat).unwrap();
        assert_relative_eq!(l4, l1 / 2.0, max_relative = 1e-15);
        // electron at 300 K, evaluated independently at 40 digits
        let si = ThermoContext::si(300.0).unwrap();
        let electron = sp(9.109_383_701_5e-31, 2);
        assert_relative_eq!(
            thermal_wavelength(&electron, &si).unwrap(),
            4.303_475_436_958_385_7e-9,
            max_relative = 1e-14
        );
        assert!(ThermoContext::si(0.0).is_err());
        assert!(ThermoSpecies::new(0.0, 1, 0.0).is_err());
    }

    #[test]
    fn fugacities() {
        let nat = ThermoContext::natural(2.0).unwrap();
        assert_eq!(fugacity(0.0, &nat).unwrap(), 1.0);
        assert_relative_eq!(
            fugacity(2.0, &nat).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-15
        );
        assert!(matches!(
            fugacity(1500.0, &nat),
            Err(KineticsError::FugacityOverflow(_))
        ));
    }

    #[test]
    fn concentrations() {
        let nat = ThermoContext::natural(1.0).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert_relative_eq!(
            classical_concentration(&sp(two_pi, 1), &nat).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            classical_concentration(&sp(two_pi, 2), &nat).unwrap(),
            2.0 * classical_concentration(&sp(two_pi, 1), &nat).unwrap(),
            max_relative = 1e-15
        );
        let excited = ThermoSpecies::new(two_pi, 1, 1.0).unwrap();
        assert_relative_eq!(
            classical_concentration(&excited, &nat).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-14
        );
    }

    #[test]
    fn equipartition() {
        let nat = ThermoContext::natural(1.0).unwrap();
        assert_relative_eq!(equipartition_speed(3.0, &nat).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            equipartition_speed(12.0, &nat).unwrap(),
            0.5 * equipartition_speed(3.0, &nat).unwrap(),
            epsilon = 1e-15
        );
        let hot = ThermoContext::natural(4.0).unwrap();
        assert_relative_eq!(equipartition_speed(3.0, &hot).unwrap(), 2.0, epsilon = 1e-15);
        assert!(equipartition_speed(-3.0, &hot).is_err());
    }

    #[test]
    fn symmetric_quartet_balances() {
        let q = symmetric();
        assert_eq!(predicted_sigma_ratio(&q).unwrap(), 1.0);
        let all_equal = Quartet::new(sp(1.0, 1), sp(1.0, 1), sp(1.0, 1), sp(1.0, 1)).unwrap();
        let kin = KineticQuartet {
            speeds: [1.0; 4],
            sigma_fwd: 0.3,
            sigma_bwd: 0.3,
        };
        assert_eq!(detailed_balance_residual(&all_equal, &kin).unwrap(), 0.0);
        let perturbed = KineticQuartet {
            sigma_fwd: 0.303,
            ..kin
        };
        let res = detailed_balance_residual(&all_equal, &perturbed).unwrap();
        assert_relative_eq!(res, 0.01 / 1.01, max_relative = 1e-12);
    }

    #[test]
    fn sigma_ratio_scalings() {
        let q = Quartet::new(sp(1.0, 1), sp(1.0, 1), sp(1.0, 2), sp(1.0, 1)).unwrap();
        assert_eq!(predicted_sigma_ratio(&q).unwrap(), 2.0);
        let q = Quartet::new(sp(1.0, 1), sp(1.0, 1), sp(2.0, 1), sp(1.0, 1)).unwrap();
        assert_relative_eq!(
            predicted_sigma_ratio(&q).unwrap(),
            2.378_414_230_005_442_1,
            max_relative = 1e-15
        );
        let mut bad = symmetric();
        bad.c.degeneracy = 0;
        assert!(predicted_sigma_ratio(&bad).is_err());
    }

    #[test]
    fn potential_gap() {
        let nat = ThermoContext::natural(2.0).unwrap();
        let q = Quartet::new(
            ThermoSpecies::new(1.0, 1, 0.5).unwrap(),
            ThermoSpecies::new(1.0, 1, 1.5).unwrap(),
            ThermoSpecies::new(1.0, 1, 1.0).unwrap(),
            ThermoSpecies::new(1.0, 1, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(chemical_potential_gap(&q, &nat).unwrap(), 0.0);
    }
}
