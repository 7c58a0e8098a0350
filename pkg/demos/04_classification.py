"""
Candidate pairs and admissible triples
======================================

The classification step is mostly bookkeeping: list the (g, k) pairs with
dim g - dim k = 5, discard those ruled out, and record which subgroup triples
have spheres as singular-to-principal quotients.
"""

# %%
from nklab.classify import admissible_triples, borel_table, classification_json, enumerate_pairs, sphere_check

for p in enumerate_pairs():
    verdict = "survives" if p.survives else f"excluded ({p.exclusion.reason_code})"
    print(f"{p.label:22s} {verdict}")

# %%
# Only the ideal test is computed from structure constants; the other verdicts
# carry a short justification.
for p in enumerate_pairs():
    if p.exclusion is not None:
        print(f"{p.label}: {p.exclusion.citation}")

# %%
# Transitive sphere actions up to S^15, and the rows used by the triples.
print(len(borel_table()), "rows")
for group in ("SU3", "SU2xSU2"):
    for t in admissible_triples(group):
        rows = [sphere_check(group, H, t.K) for H in (t.H1, t.H2)]
        spheres = ", ".join(f"{H}/{t.K} = S^{r.sphere_dim}" for H, r in zip((t.H1, t.H2), rows))
        print(f"{group}: ({t.H1}, {t.K}, {t.H2}) -> {t.model_label}   [{spheres}]")

# %%
print(classification_json("su3"))
