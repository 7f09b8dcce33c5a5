"""Phase-shift detection with Schrödinger cat states of light.

Submodules:

``analytic``        closed-form overlap, parity and photon statistics
``fock``            truncated Fock-space states used as a numerical oracle
``interferometer``  Mach-Zehnder transfer matrix and phase-to-displacement map
``optimizer``       parity minimum and its series approximation
``montecarlo``      seeded photon-counting detection campaigns
``cli``             command-line front end
"""

__version__ = "0.1.0"
