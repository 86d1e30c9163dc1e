"""Walk through I_n and J_n: orders, rank ideals and their Rees quotients."""
from ellislab.partial import enumerate_monoid, rank
from ellislab.semigroup import (
    check_inverse_monoid, monoid_of_partial_maps, rank_ideal, rees_quotient,
)

for mode in ("I", "J"):
    print(f"-- {mode}_n --")
    for n in range(1, 5):
        elements = enumerate_monoid(n, mode)
        by_rank = [sum(1 for e in elements if rank(e) == k) for k in range(n + 1)]
        print(f"n={n}  order={len(elements):4d}  by rank={by_rank}")

S = monoid_of_partial_maps(enumerate_monoid(3, "I"))
print("\nI_3 is an inverse monoid:", check_inverse_monoid(S).ok)
for k in range(4):
    ideal = rank_ideal(S, k)
    Q = rees_quotient(S, ideal)
    print(f"rank <= {k}: ideal size {len(ideal.members):2d}, Rees quotient order {Q.monoid.order}")
