"""qubuslab: exact coherent-bus entangling gates and cluster-growth statistics.

The package has five functional layers:

* :mod:`qubuslab.busim` - exact hybrid qubit+bus states and measurements;
* :mod:`qubuslab.gates` - entangling-gate protocols with outcome tables,
  corrections and error budgets;
* :mod:`qubuslab.graphstab` - stabilizer engine for graph/cluster states,
  fusion and failure recovery;
* :mod:`qubuslab.growth` - seeded Monte Carlo of chain-growth strategies;
* :mod:`qubuslab.analytics` - closed-form scaling laws and reference series.

:mod:`qubuslab.cli` wires everything into the ``qubuslab`` command.
"""

from . import analytics, busim, gates, graphstab, growth

__version__ = "0.1.0"

__all__ = ["analytics", "busim", "gates", "graphstab", "growth", "__version__"]
