"""Browse the table of Nagano pairs and instantiate a parametrized row."""

from nagano import tables

print(tables.format_table(tables.real_type_rows()))
print()
for p, q in [(1, 3), (2, 2), (2, 5)]:
    row = tables.instantiate("iv", p=p, q=q)
    print(row["space"], "rank", row["rank"], "higher rank" if row["higher_rank"] else "rank one")
