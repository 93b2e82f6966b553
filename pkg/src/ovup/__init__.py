"""Algebras of partial functions under override, update, @ and minus.

Submodules:

    pfun      partial functions and the four operations
    term      term language: parser, printer, substitution, evaluation
    falg      finite operation-table algebras, sweeps, homomorphisms
    laws      the law library and the lambda/eta schema generators
    choice    choice functions, free algebras, update-term synthesis
    arr       hyperplane arrangements and face semigroups
    proofchk  equational proof-script checker
    finder    finite counterexample-model search
    cli       command-line front end
"""

from . import arr, choice, falg, finder, laws, pfun, proofchk, term

__all__ = ["arr", "choice", "falg", "finder", "laws", "pfun", "proofchk", "term"]
__version__ = "0.1.0"
