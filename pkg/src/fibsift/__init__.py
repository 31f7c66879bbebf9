"""Certified computations for the equation F_k +- 2 = y^p.

Modules, bottom up: ``okarith`` (exact arithmetic in Z[eps] and Q(sqrt5, sqrt6)),
``residue`` (finite-field reductions), ``frey`` (point counting on the Frey
curve), ``galois_sieve``, ``kraus``, ``linforms``, ``unit_eq`` (the sieves and
bounds), and ``oracle``/``runner``/``cli`` for orchestration.  Every sieve
emits :class:`~fibsift.certificates.SieveCertificate` records that can be
replayed with :func:`~fibsift.certificates.validate`.
"""

from .certificates import SieveCertificate, read_certificates, validate, write_certificates
from .certreal import CertReal

__version__ = "0.1.0"

__all__ = ["CertReal", "SieveCertificate", "read_certificates", "validate", "write_certificates", "__version__"]
