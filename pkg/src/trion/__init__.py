"""Three-body bound states on a simulated qubit register.

Explicitly correlated exponential bases give the Hamiltonian of a
three-body Coulomb system (H2+, HD+, He, H-); after orthogonalisation it is
binary-encoded onto log2(N) qubits and minimised with a layered
disentangled ansatz or an adaptive one.
"""

__version__ = "0.1.0"
