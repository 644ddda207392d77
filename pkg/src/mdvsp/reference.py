"""Best-known objectives and published heuristic results for the 70 benchmark instances.

Each row is ``(name, best, h1, h2, h3, pct_h1, pct_h2, pct_h3)``; ``h2`` columns are
``None`` for the larger instances where no H2 result exists.  Percent strings are
kept exactly as printed.
"""

from __future__ import annotations

from typing import NamedTuple


class ReferenceRow(NamedTuple):
    name: str
    best: int
    h1: int
    h2: int | None
    h3: int
    pct_h1: str
    pct_h2: str | None
    pct_h3: str


# first 30 rows: first table (m4/m8, n<=1500); the rest: second table
ROWS: tuple[ReferenceRow, ...] = (
    ReferenceRow('m4n500s0', 1289114, 1296409, 1295671, 1295678, '0.56', '0.50', '0.50'),
    ReferenceRow('m4n500s1', 1241618, 1247438, 1246655, 1247173, '0.46', '0.40', '0.44'),
    ReferenceRow('m4n500s2', 1283811, 1292079, 1291745, 1290891, '0.64', '0.61', '0.55'),
    ReferenceRow('m4n500s3', 1258634, 1263624, 1263045, 1264473, '0.39', '0.35', '0.46'),
    ReferenceRow('m4n500s4', 1317077, 1322535, 1322306, 1321138, '0.41', '0.39', '0.30'),
    ReferenceRow('m4n1000s0', 2516247, 2528728, 2527966, 2528299, '0.49', '0.46', '0.47'),
    ReferenceRow('m4n1000s1', 2413393, 2421735, 2421735, 2420440, '0.34', '0.34', '0.29'),
    ReferenceRow('m4n1000s2', 2452905, 2461985, 2461787, 2461347, '0.37', '0.36', '0.34'),
    ReferenceRow('m4n1000s3', 2490812, 2498319, 2498046, 2498423, '0.30', '0.29', '0.30'),
    ReferenceRow('m4n1000s4', 2519191, 2525357, 2525004, 2524898, '0.24', '0.23', '0.22'),
    ReferenceRow('m4n1500s0', 3830912, 3847046, 3846785, 3846761, '0.41', '0.41', '0.41'),
    ReferenceRow('m4n1500s1', 3559176, 3566055, 3565962, 3564918, '0.19', '0.19', '0.16'),
    ReferenceRow('m4n1500s2', 3649757, 3662319, 3661323, 3661344, '0.34', '0.31', '0.31'),
    ReferenceRow('m4n1500s3', 3406815, 3419905, 3419810, 3417225, '0.38', '0.38', '0.30'),
    ReferenceRow('m4n1500s4', 3567122, 3583176, 3582852, 3581059, '0.45', '0.44', '0.39'),
    ReferenceRow('m8n500s0', 1292411, 1304837, 1302517, 1301395, '0.96', '0.78', '0.69'),
    ReferenceRow('m8n500s1', 1276919, 1289875, 1288006, 1289407, '1.01', '0.86', '0.97'),
    ReferenceRow('m8n500s2', 1304251, 1316965, 1316108, 1313993, '0.97', '0.90', '0.74'),
    ReferenceRow('m8n500s3', 1277838, 1290397, 1290397, 1290852, '0.98', '0.98', '1.01'),
    ReferenceRow('m8n500s4', 1276010, 1289435, 1287919, 1288606, '1.05', '0.93', '0.98'),
    ReferenceRow('m8n1000s0', 2422112, 2441490, 2439817, 2439893, '0.80', '0.73', '0.73'),
    ReferenceRow('m8n1000s1', 2524293, 2542668, 2542668, 2545417, '0.72', '0.72', '0.83'),
    ReferenceRow('m8n1000s2', 2556313, 2581639, 2580507, 2579511, '0.99', '0.94', '0.90'),
    ReferenceRow('m8n1000s3', 2478393, 2499109, 2495968, 2494389, '0.83', '0.70', '0.64'),
    ReferenceRow('m8n1000s4', 2498388, 2518121, 2517631, 2516357, '0.79', '0.77', '0.71'),
    ReferenceRow('m8n1500s0', 3500160, 3527083, 3527083, 3530381, '0.76', '0.76', '0.86'),
    ReferenceRow('m8n1500s1', 3802650, 3821483, 3819634, 3818617, '0.49', '0.44', '0.42'),
    ReferenceRow('m8n1500s2', 3605094, 3640171, 3635622, 3636799, '0.97', '0.84', '0.87'),
    ReferenceRow('m8n1500s3', 3515802, 3537090, 3536906, 3536931, '0.60', '0.60', '0.60'),
    ReferenceRow('m8n1500s4', 3704953, 3733572, 3733572, 3730221, '0.77', '0.77', '0.68'),
    ReferenceRow('m8n2000s0', 4916810, 4975718, None, 4962626, '1.19', None, '0.93'),
    ReferenceRow('m8n2000s1', 4769442, 4819440, None, 4813103, '1.04', None, '0.91'),
    ReferenceRow('m8n2000s2', 4897886, 4948430, None, 4938756, '1.03', None, '0.83'),
    ReferenceRow('m8n2000s3', 5171924, 5231090, None, 5220119, '1.14', None, '0.93'),
    ReferenceRow('m8n2000s4', 4761862, 4808420, None, 4802721, '0.97', None, '0.85'),
    ReferenceRow('m8n2500s0', 5911824, 5981468, None, 5961055, '1.17', None, '0.83'),
    ReferenceRow('m8n2500s1', 6296870, 6363706, None, 6357577, '1.06', None, '0.96'),
    ReferenceRow('m8n2500s2', 5835360, 5895176, None, 5887819, '1.02', None, '0.89'),
    ReferenceRow('m8n2500s3', 6046374, 6110906, None, 6104058, '1.06', None, '0.95'),
    ReferenceRow('m8n2500s4', 6021410, 6078364, None, 6075874, '0.94', None, '0.90'),
    ReferenceRow('m12n1500s0', 3621952, 3670642, None, 3663952, '1.34', None, '1.16'),
    ReferenceRow('m12n1500s1', 3523474, 3570252, None, 3570484, '1.32', None, '1.33'),
    ReferenceRow('m12n1500s2', 3932474, 3988062, None, 3983324, '1.41', None, '1.29'),
    ReferenceRow('m12n1500s3', 3789274, 3833318, None, 3831427, '1.15', None, '1.10'),
    ReferenceRow('m12n1500s4', 3694646, 3745298, None, 3738872, '1.37', None, '1.19'),
    ReferenceRow('m12n2000s0', 5239126, 5301310, None, 5294030, '1.18', None, '1.04'),
    ReferenceRow('m12n2000s1', 4844414, 4907954, None, 4899575, '1.31', None, '1.13'),
    ReferenceRow('m12n2000s2', 4611692, 4667510, None, 4665170, '1.21', None, '1.16'),
    ReferenceRow('m12n2000s3', 4822028, 4881702, None, 4871930, '1.23', None, '1.03'),
    ReferenceRow('m12n2000s4', 4961406, 5025946, None, 5019364, '1.30', None, '1.16'),
    ReferenceRow('m12n2500s0', 5860766, 5948488, None, 5937754, '1.49', None, '1.13'),
    ReferenceRow('m12n2500s1', 6000516, 6070994, None, 6071772, '1.17', None, '1.18'),
    ReferenceRow('m12n2500s2', 5940276, 6012290, None, 6005232, '1.21', None, '1.10'),
    ReferenceRow('m12n2500s3', 6072130, 6154820, None, 6140502, '1.36', None, '1.12'),
    ReferenceRow('m12n2500s4', 5748976, 5817298, None, 5819317, '1.18', None, '1.12'),
    ReferenceRow('m16n1500s0', 3568522, 3618204, None, 3616462, '1.39', None, '1.34'),
    ReferenceRow('m16n1500s1', 3591374, 3637940, None, 3641353, '1.29', None, '1.39'),
    ReferenceRow('m16n1500s2', 3554800, 3604392, None, 3601830, '1.39', None, '1.32'),
    ReferenceRow('m16n1500s3', 3861652, 3914558, None, 3908222, '1.27', None, '1.20'),
    ReferenceRow('m16n1500s4', 3603796, 3657334, None, 3659326, '1.48', None, '1.54'),
    ReferenceRow('m16n2000s0', 4789504, 4856390, None, 4852389, '1.39', None, '1.31'),
    ReferenceRow('m16n2000s1', 4680998, 4745990, None, 4744248, '1.38', None, '1.35'),
    ReferenceRow('m16n2000s2', 4774408, 4847436, None, 4834352, '1.53', None, '1.25'),
    ReferenceRow('m16n2000s3', 4850652, 4926124, None, 4920016, '1.55', None, '1.43'),
    ReferenceRow('m16n2000s4', 4700490, 4767256, None, 4761708, '1.42', None, '1.30'),
    ReferenceRow('m16n2500s0', 5960298, 6045500, None, 6038849, '1.42', None, '1.31'),
    ReferenceRow('m16n2500s1', 6055252, 6148106, None, 6138606, '1.53', None, '1.37'),
    ReferenceRow('m16n2500s2', 6043364, 6123422, None, 6118930, '1.32', None, '1.25'),
    ReferenceRow('m16n2500s3', 6067858, 6155328, None, 6148939, '1.44', None, '1.33'),
    ReferenceRow('m16n2500s4', 5857966, 5952214, None, 5942387, '1.60', None, '1.44'),
)

FIRST_TABLE = ROWS[:30]
SECOND_TABLE = ROWS[30:]

BEST_KNOWN: dict[str, int] = {r.name: r.best for r in ROWS}


def best_known(name: str) -> int | None:
    return BEST_KNOWN.get(name)
