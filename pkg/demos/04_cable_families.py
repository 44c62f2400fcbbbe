"""Cable families of the untwisted positive double of the trefoil."""
from upsilon import bundled_facts, derive
from upsilon.independence import family_iterated_cables, family_power_cables, summand_family

wh = derive("wh+(RHT)", bundled_facts())

report = family_power_cables(wh, 2, 6)
print("\n".join(report.summary_lines()))

ps, report = family_iterated_cables(wh, 3)
print("greedy iterated cabling parameters:", ps, "->", report.verdict)

report = summand_family(wh, 6)
print("summand certificate for six power cables:", report.verdict)
