"""Reparametrize a balanced angle family by a unimodular basis change.

Used by the gauge-invariance tests: the new family describes the same set
of balanced angles (same lambda and mu forms composed with an invertible
integer change of free symbols), so every derived payload must coincide.
"""

from knotlocal.triangulate import AffineForm, AngleFamily, Monomial


def regauge(fam, umat, prefix="u"):
    """New AngleFamily with basis symbols u_j, old basis s_i = sum_j U[i][j] u_j.

    `umat` must be unimodular (integer inverse) so that the map is a
    bijection on integer exponent lattices; this is asserted loosely by
    requiring det = +-1 for 2x2/3x3 inputs.
    """
    k = len(fam.basis)
    assert len(umat) == k and all(len(r) == k for r in umat)
    new_syms = tuple(f"{prefix}{j}" for j in range(k))
    dot_table = {
        s: AffineForm(0, {new_syms[j]: umat[i][j] for j in range(k)
                          if umat[i][j]})
        for i, s in enumerate(fam.basis)
    }
    ddot_table = {
        s: Monomial({new_syms[j]: umat[i][j] for j in range(k)
                     if umat[i][j]})
        for i, s in enumerate(fam.basis)
    }
    return AngleFamily(
        basis=new_syms,
        dot={s: f.substitute(dot_table) for s, f in fam.dot.items()},
        ddot={s: m.substitute(ddot_table) for s, m in fam.ddot.items()},
        lam_dot=fam.lam_dot.substitute(dot_table),
        lam_ddot=fam.lam_ddot.substitute(ddot_table),
        mu_dot=fam.mu_dot.substitute(dot_table),
    )
