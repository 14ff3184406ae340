"""twistkit: finite-group homology, cocycles, central extensions, twisted
group algebras and crossed products, plus a symbolic Hirsch-length and
dimension-bound calculus."""

__version__ = "0.1.0"
