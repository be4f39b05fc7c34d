/// Cluster shape and algorithm knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterConfig {
    pub q: usize,
    /// Superstep count; `None` means `ceil(log8 n)`.
    pub syncs: Option<usize>,
    /// Growth factor between consecutive superstep sizes.
    pub beta: u32,
    /// Hybrid switches to DGLL once the mean ψ of a superstep exceeds this.
    pub psi_th: f64,
    /// Number of top-ranked hubs replicated in every node's common table.
    pub eta: usize,
    pub workers_per_node: usize,
    /// Seeds message delivery order.
    pub seed: u64,
}

pub const PSI_TH_SCALE_FREE: f64 = 100.0;
pub const PSI_TH_ROAD: f64 = 500.0;

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig { q: 1, syncs: None, beta: 8, psi_th: PSI_TH_SCALE_FREE, eta: 16, workers_per_node: 1, seed: 0 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ClusterConfigError {
    #[error("node count q must be at least 1")]
    Nodes,
    #[error("superstep growth factor beta must be at least 2 (got {0})")]
    Beta(u32),
    #[error("synchronization count must be at least 1")]
    Syncs,
    #[error("workers per node must be at least 1")]
    Workers,
    #[error("psi threshold must be a number")]
    PsiThreshold,
}

impl ClusterConfig {
    pub fn with_q(q: usize) -> Self {
        ClusterConfig { q, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), ClusterConfigError> {
        if self.q == 0 {
            return Err(ClusterConfigError::Nodes);
        }
        if self.beta < 2 {
            return Err(ClusterConfigError::Beta(self.beta));
        }
        if self.syncs == Some(0) {
            return Err(ClusterConfigError::Syncs);
        }
        if self.workers_per_node == 0 {
            return Err(ClusterConfigError::Workers);
        }
        if self.psi_th.is_nan() {
            return Err(ClusterConfigError::PsiThreshold);
        }
        Ok(())
    }

    pub fn effective_syncs(&self, n: usize) -> usize {
        self.syncs.unwrap_or_else(|| crate::schedule::default_syncs(n))
    }
}
