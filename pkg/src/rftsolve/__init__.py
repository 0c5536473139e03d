"""Self-consistent matrix transport solver for transmission eigenvalue densities."""
import numba

# pick an available threading layer without probing an outdated TBB
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

__version__ = "0.1.0"
