"""Subdirect products of two and three finite groups.

Small finite groups are handled by full enumeration: Cayley tables, subgroup
lattices and isomorphism search. On top of that sit the two-factor Goursat
correspondence, the structure of 2-factor injective subdirect products of
three factors, closed-form counts for symmetric groups and a brute-force
oracle that checks them.
"""

__version__ = "0.1.0"
