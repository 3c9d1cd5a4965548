"""queerkit: exact modular representation theory of q(n), p odd.

Layers, bottom up:

* :mod:`queerkit.gf` -- GF(p^k) scalars, polynomials, Artin-Schreier.
* :mod:`queerkit.linalg` -- exact dense linear algebra in slice layout.
* :mod:`queerkit.liesuper` -- q(n) and gl(m|n) with brackets, p-maps,
  centralizers, gradings, and the compatible-pair subalgebra.
* :mod:`queerkit.pchar` -- odd p-characters, normalization, weight sets.
* :mod:`queerkit.modrep` -- reduced enveloping modules: straightening,
  induction, Clifford and Verma modules, meataxe, homs, Ext.
* :mod:`queerkit.analysis` -- the verification suites (simplicity and
  semisimplicity criteria, identities, divisibility, blocks, bijections).
* :mod:`queerkit.cli` -- the command-line reporting tool.
"""

__version__ = "0.1.0"
