"""trapkit: traces-and-permutations calculus on decorated graphs.

Decorated directed graphs with indexed inputs/outputs, partial trace maps,
horizontal/vertical concatenation, amplitude evaluation over numeric
backends (dense tensors, quadrature-sampled kernels on flat tori), and the
unitary completion of a non-unitary backend.
"""

__version__ = "0.1.0"
