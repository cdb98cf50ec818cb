"""Regenerate data/e_coli_core.json and data/e_coli_core_xyl.json from cobrapy's bundled core model.

The xylose variant adds the D-xylose uptake and isomerase/kinase steps
(xylE, xylA, xylB) feeding xu5p__D_c in the pentose phosphate pathway.
"""
import pathlib

import cobra

out = pathlib.Path(__file__).resolve().parent.parent / "data"
model = cobra.io.load_model("textbook")
cobra.io.save_json_model(model, str(out / "e_coli_core.json"))

xyl_e = cobra.Metabolite("xyl__D_e", name="D-Xylose", compartment="e", formula="C5H10O5")
xyl_c = cobra.Metabolite("xyl__D_c", name="D-Xylose", compartment="c", formula="C5H10O5")
xylu_c = cobra.Metabolite("xylu__D_c", name="D-Xylulose", compartment="c", formula="C5H10O5")
m = model.metabolites

ex = cobra.Reaction("EX_xyl__D_e", name="D-Xylose exchange", lower_bound=0.0, upper_bound=1000.0)
ex.add_metabolites({xyl_e: -1.0})
t2 = cobra.Reaction("XYLt2", name="D-xylose transport in via proton symport", lower_bound=0.0, upper_bound=1000.0)
t2.add_metabolites({xyl_e: -1.0, m.h_e: -1.0, xyl_c: 1.0, m.h_c: 1.0})
t2.gene_reaction_rule = "b4031"
iso = cobra.Reaction("XYLI1", name="Xylose isomerase", lower_bound=-1000.0, upper_bound=1000.0)
iso.add_metabolites({xyl_c: -1.0, xylu_c: 1.0})
iso.gene_reaction_rule = "b3565"
kin = cobra.Reaction("XYLK", name="Xylulokinase", lower_bound=0.0, upper_bound=1000.0)
kin.add_metabolites({m.atp_c: -1.0, xylu_c: -1.0, m.adp_c: 1.0, m.h_c: 1.0, m.get_by_id("xu5p__D_c"): 1.0})
kin.gene_reaction_rule = "b3564"
model.add_reactions([ex, t2, iso, kin])
for gid, name in (("b4031", "xylE"), ("b3565", "xylA"), ("b3564", "xylB")):
    model.genes.get_by_id(gid).name = name
model.id = "e_coli_core_xyl"
cobra.io.save_json_model(model, str(out / "e_coli_core_xyl.json"))
