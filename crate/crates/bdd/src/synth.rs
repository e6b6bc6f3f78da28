use crate::{Bdd, DdManager, Result, VarId};

impl DdManager {
    /// Witness functions for the `outputs` of the relation `f`.
    ///
    /// Returns one diagram per output, in the given order. The j-th diagram
    /// depends only on the non-output variables and on outputs `0..j`; feeding
    /// it the values chosen for those earlier outputs yields a value for
    /// output j. Whenever some output assignment satisfies `f` for a given
    /// input, the chosen assignment does too. An output is set to 1 only if 0
    /// admits no witness and 1 does, so unconstrained or unsatisfiable inputs
    /// resolve to 0.
    pub fn solve_outputs(&mut self, f: Bdd, outputs: &[VarId]) -> Result<Vec<Bdd>> {
        self.raw(f)?;
        for &y in outputs {
            self.check_var(y)?;
        }
        // layers[j] = ∃ y_{j+1} .. y_{m-1}. f
        let mut layers = vec![f; outputs.len()];
        let mut acc = f;
        for (j, &y) in outputs.iter().enumerate().rev() {
            layers[j] = acc;
            acc = self.exists(&[y], acc)?;
        }
        let mut witnesses = Vec::with_capacity(outputs.len());
        for (j, &y) in outputs.iter().enumerate() {
            let when_low = self.restrict(layers[j], y, false)?;
            let when_high = self.restrict(layers[j], y, true)?;
            let low_fails = self.not(when_low)?;
            witnesses.push(self.and(low_fails, when_high)?);
        }
        Ok(witnesses)
    }

    /// Substitutes earlier witnesses into later ones so that every returned
    /// diagram mentions no output variable.
    pub fn resolve_witnesses(&mut self, witnesses: &[Bdd], outputs: &[VarId]) -> Result<Vec<Bdd>> {
        let mut resolved: Vec<Bdd> = Vec::with_capacity(witnesses.len());
        for (j, &w) in witnesses.iter().enumerate() {
            let subst: Vec<(VarId, Bdd)> = outputs[..j]
                .iter()
                .copied()
                .zip(resolved.iter().copied())
                .collect();
            resolved.push(self.vector_compose(w, &subst)?);
        }
        Ok(resolved)
    }
}
