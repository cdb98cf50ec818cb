"""Independent reference FBA/dFBA on cobrapy (GLPK) used to derive regression values.

Usage: python3 scripts/reference_dfba.py [model.json]
"""
import sys

import cobra
from cobra.flux_analysis import single_gene_deletion

VG, KG, VX, KX, KIG, O2 = 10.0, 0.015, 9.0, 0.01, 0.01, 5.0
EXG, EXX, EXO = "EX_glc__D_e", "EX_xyl__D_e", "EX_o2_e"


def fba(model, lg, lx):
    with model:
        model.reactions.get_by_id(EXG).lower_bound = -lg
        model.reactions.get_by_id(EXX).lower_bound = -lx
        model.reactions.get_by_id(EXO).lower_bound = -O2
        sol = model.optimize()
        if sol.status != "optimal":
            return 0.0, 0.0, 0.0
        mu = sol.objective_value
        # min-L1 uptake tie-break over the three tracked exchanges
        bio = [r for r in model.reactions if r.objective_coefficient != 0][0]
        bio.lower_bound = mu - 1e-9
        ts = []
        for rid in (EXG, EXX, EXO):
            v = model.reactions.get_by_id(rid).flux_expression
            t = model.problem.Variable("t_" + rid, lb=0)
            model.add_cons_vars([t,
                                 model.problem.Constraint(t - v, lb=0),
                                 model.problem.Constraint(t + v, lb=0)])
            ts.append(t)
        model.objective = model.problem.Objective(sum(ts), direction="min")
        sol2 = model.optimize()
        if sol2.status != "optimal":
            return mu, 0.0, 0.0
        return mu, max(0.0, -sol2.fluxes[EXG]), max(0.0, -sol2.fluxes[EXX])


def dfba(model, g, x, b=0.01, dt=0.1, steps=200):
    rows = []
    for k in range(steps):
        vg = VG * g / (KG + g)
        vx = VX * x / (KX + x) / (1 + g / KIG)
        mu, ug, ux = fba(model, vg, vx)
        b = b * (1 + mu * dt)
        g = max(0.0, g - ug * b * dt)
        x = max(0.0, x - ux * b * dt)
        rows.append(((k + 1) * dt, b, g, x, mu, ug, ux))
    return rows


if __name__ == "__main__":
    path = sys.argv[1] if len(sys.argv) > 1 else "data/e_coli_core_xyl.json"
    m = cobra.io.load_json_model(path)
    mu, ug, ux = fba(m, 10.0, 0.0)
    print("fba glc10 o2 5: mu=%.12g ug=%.12g" % (mu, ug))
    with m:
        m.reactions.get_by_id(EXG).lower_bound = -10
        m.reactions.get_by_id(EXO).lower_bound = -5
        print("plain cobra mu=%.12g" % m.slim_optimize())
    rows = dfba(m, 10.0, 10.0)
    x0 = 10.0
    pre = sum(1 for r in rows if r[2] > 0.1)
    for r in rows[::5]:
        print("t=%.1f B=%.6g G=%.6g X=%.9g mu=%.4g ug=%.4g ux=%.4g" % r)
    # xylose consumed while glucose > 0.1
    prevx = x0
    cons_pre = 0.0
    for r in rows:
        if r[2] > 0.1:
            cons_pre = x0 - r[3]
    print("xylose consumed while G>0.1:", cons_pre, "fraction", cons_pre / x0)
    shift = next(r[0] for r in rows if r[2] <= 0.1)
    print("glucose depletion (<=0.1) at t =", shift)
    print("final B=%.9g" % rows[-1][1])
    for r in (rows[49], rows[99], rows[149], rows[199]):
        print("t=%.1f B=%.9g G=%.9g X=%.9g" % r[:4])


def screen(model, g=22.5, x=22.5):
    vg = VG * g / (KG + g)
    vx = VX * x / (KX + x) / (1 + g / KIG)
    with model:
        model.reactions.get_by_id(EXG).lower_bound = -vg
        model.reactions.get_by_id(EXX).lower_bound = -vx
        model.reactions.get_by_id(EXO).lower_bound = -O2
        wt = model.slim_optimize()
        res = single_gene_deletion(model, processes=1)
    out = []
    for ids, row in res.iterrows():
        gid = list(row["ids"])[0]
        mu = row["growth"] if row["status"] == "optimal" else 0.0
        if mu != mu:
            mu = 0.0
        out.append((gid, mu / wt))
    return wt, sorted(out)
