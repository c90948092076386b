"""Simulated mean/variance of the Dickey-Fuller t under the unit-root null.

Generated by tools/gen_ips_moments.py; do not edit by hand.
Replications per cell: 200000; master seed 20260816.
"""

IPS_T_GRID = (8, 9, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100)
IPS_MAX_LAG = 8

# det -> (T, p) -> (mean, variance)
IPS_MOMENTS = {
    'c': {
        (8, 0): (-1.510621, 1.400850),
        (8, 1): (-1.564854, 3.373618),
        (9, 0): (-1.507034, 1.244516),
        (9, 1): (-1.509790, 1.938151),
        (10, 0): (-1.509116, 1.142574),
        (10, 1): (-1.494095, 1.538643),
        (10, 2): (-1.316298, 2.897217),
        (12, 0): (-1.507985, 1.018888),
        (12, 1): (-1.490222, 1.253171),
        (12, 2): (-1.308270, 1.609537),
        (12, 3): (-1.341754, 3.555560),
        (15, 0): (-1.511529, 0.939513),
        (15, 1): (-1.497774, 1.072616),
        (15, 2): (-1.353173, 1.221971),
        (15, 3): (-1.315998, 1.510663),
        (15, 4): (-1.175659, 2.075706),
        (20, 0): (-1.516019, 0.858037),
        (20, 1): (-1.506013, 0.933770),
        (20, 2): (-1.398726, 1.024832),
        (20, 3): (-1.371908, 1.135751),
        (20, 4): (-1.263563, 1.283472),
        (20, 5): (-1.226446, 1.495747),
        (20, 6): (-1.110670, 1.826488),
        (20, 7): (-1.116786, 3.274743),
        (25, 0): (-1.521562, 0.821093),
        (25, 1): (-1.508863, 0.879903),
        (25, 2): (-1.434507, 0.942962),
        (25, 3): (-1.411676, 1.015089),
        (25, 4): (-1.325160, 1.096354),
        (25, 5): (-1.295330, 1.194941),
        (25, 6): (-1.198585, 1.322325),
        (25, 7): (-1.170191, 1.486198),
        (25, 8): (-1.072876, 1.701268),
        (30, 0): (-1.525707, 0.803664),
        (30, 1): (-1.518207, 0.846901),
        (30, 2): (-1.452923, 0.893264),
        (30, 3): (-1.437714, 0.944972),
        (30, 4): (-1.366671, 1.005228),
        (30, 5): (-1.342326, 1.076289),
        (30, 6): (-1.271551, 1.150246),
        (30, 7): (-1.237773, 1.247614),
        (30, 8): (-1.160315, 1.342580),
        (40, 0): (-1.524780, 0.772955),
        (40, 1): (-1.520598, 0.800473),
        (40, 2): (-1.476162, 0.832552),
        (40, 3): (-1.466244, 0.871022),
        (40, 4): (-1.413179, 0.914826),
        (40, 5): (-1.396038, 0.959242),
        (40, 6): (-1.346494, 0.998594),
        (40, 7): (-1.330019, 1.050986),
        (40, 8): (-1.271286, 1.103951),
        (50, 0): (-1.526720, 0.759607),
        (50, 1): (-1.518759, 0.783152),
        (50, 2): (-1.483199, 0.812932),
        (50, 3): (-1.485047, 0.833891),
        (50, 4): (-1.438322, 0.863151),
        (50, 5): (-1.431997, 0.894658),
        (50, 6): (-1.389686, 0.922705),
        (50, 7): (-1.377127, 0.963216),
        (50, 8): (-1.334976, 0.997909),
        (60, 0): (-1.526549, 0.752244),
        (60, 1): (-1.521934, 0.772799),
        (60, 2): (-1.493374, 0.789224),
        (60, 3): (-1.487370, 0.807448),
        (60, 4): (-1.458298, 0.828077),
        (60, 5): (-1.453429, 0.854364),
        (60, 6): (-1.416699, 0.877525),
        (60, 7): (-1.407097, 0.904257),
        (60, 8): (-1.373452, 0.938120),
        (80, 0): (-1.529389, 0.739778),
        (80, 1): (-1.525805, 0.749432),
        (80, 2): (-1.502714, 0.766104),
        (80, 3): (-1.504799, 0.773534),
        (80, 4): (-1.475274, 0.800202),
        (80, 5): (-1.474656, 0.814276),
        (80, 6): (-1.449148, 0.830949),
        (80, 7): (-1.441254, 0.842187),
        (80, 8): (-1.418431, 0.869026),
        (100, 0): (-1.528988, 0.727991),
        (100, 1): (-1.528438, 0.743812),
        (100, 2): (-1.511652, 0.755156),
        (100, 3): (-1.507808, 0.764276),
        (100, 4): (-1.490492, 0.779897),
        (100, 5): (-1.486110, 0.786535),
        (100, 6): (-1.465928, 0.799346),
        (100, 7): (-1.463253, 0.818897),
        (100, 8): (-1.441668, 0.828306),
    },
    'ct': {
        (8, 0): (-2.188604, 1.951391),
        (9, 0): (-2.166715, 1.448028),
        (9, 1): (-2.274310, 3.965227),
        (10, 0): (-2.164359, 1.266874),
        (10, 1): (-2.203668, 2.337878),
        (12, 0): (-2.165001, 1.039676),
        (12, 1): (-2.166933, 1.474605),
        (12, 2): (-1.903334, 2.137030),
        (15, 0): (-2.162910, 0.889387),
        (15, 1): (-2.162637, 1.088057),
        (15, 2): (-1.950732, 1.276935),
        (15, 3): (-1.915796, 1.906165),
        (15, 4): (-1.740979, 3.585379),
        (20, 0): (-2.168745, 0.785678),
        (20, 1): (-2.163800, 0.879697),
        (20, 2): (-2.019138, 0.967183),
        (20, 3): (-1.988332, 1.157196),
        (20, 4): (-1.820350, 1.338112),
        (20, 5): (-1.776783, 1.746435),
        (20, 6): (-1.621400, 2.434744),
        (25, 0): (-2.165858, 0.725295),
        (25, 1): (-2.171530, 0.796041),
        (25, 2): (-2.061910, 0.843839),
        (25, 3): (-2.042599, 0.954725),
        (25, 4): (-1.916154, 1.043714),
        (25, 5): (-1.874732, 1.220903),
        (25, 6): (-1.738717, 1.385513),
        (25, 7): (-1.695028, 1.672199),
        (25, 8): (-1.553610, 2.057813),
        (30, 0): (-2.173841, 0.689148),
        (30, 1): (-2.173088, 0.746283),
        (30, 2): (-2.085780, 0.779484),
        (30, 3): (-2.075740, 0.848571),
        (30, 4): (-1.972322, 0.917382),
        (30, 5): (-1.946456, 1.023213),
        (30, 6): (-1.834376, 1.116670),
        (30, 7): (-1.795591, 1.273439),
        (30, 8): (-1.679749, 1.412858),
        (40, 0): (-2.175120, 0.655788),
        (40, 1): (-2.178128, 0.688306),
        (40, 2): (-2.111568, 0.710249),
        (40, 3): (-2.108938, 0.752703),
        (40, 4): (-2.037126, 0.787624),
        (40, 5): (-2.022439, 0.846851),
        (40, 6): (-1.943167, 0.902828),
        (40, 7): (-1.920465, 0.969639),
        (40, 8): (-1.846555, 1.034744),
        (50, 0): (-2.174751, 0.636303),
        (50, 1): (-2.176668, 0.659278),
        (50, 2): (-2.127184, 0.675442),
        (50, 3): (-2.125959, 0.702458),
        (50, 4): (-2.071343, 0.726425),
        (50, 5): (-2.066146, 0.771715),
        (50, 6): (-2.008050, 0.798892),
        (50, 7): (-1.992199, 0.850136),
        (50, 8): (-1.933805, 0.894206),
        (60, 0): (-2.177844, 0.624490),
        (60, 1): (-2.175129, 0.640876),
        (60, 2): (-2.138059, 0.650794),
        (60, 3): (-2.138774, 0.674614),
        (60, 4): (-2.093453, 0.694000),
        (60, 5): (-2.092187, 0.723270),
        (60, 6): (-2.042093, 0.742980),
        (60, 7): (-2.035286, 0.783207),
        (60, 8): (-1.987416, 0.802319),
        (80, 0): (-2.178296, 0.606020),
        (80, 1): (-2.179124, 0.620991),
        (80, 2): (-2.150349, 0.633936),
        (80, 3): (-2.150762, 0.639171),
        (80, 4): (-2.119023, 0.653891),
        (80, 5): (-2.117233, 0.669679),
        (80, 6): (-2.083805, 0.683863),
        (80, 7): (-2.079558, 0.711154),
        (80, 8): (-2.045193, 0.723616),
        (100, 0): (-2.177601, 0.595437),
        (100, 1): (-2.181795, 0.609017),
        (100, 2): (-2.157100, 0.612034),
        (100, 3): (-2.157888, 0.620393),
        (100, 4): (-2.130000, 0.635771),
        (100, 5): (-2.131607, 0.644114),
        (100, 6): (-2.106575, 0.660544),
        (100, 7): (-2.103208, 0.672418),
        (100, 8): (-2.078498, 0.681304),
    },
}
