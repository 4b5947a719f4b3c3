from lib.numeric._complex import (to_pair, from_pair, encode, matrix_from_pairs,
                                  vector_from_pairs)
from lib.numeric._linalg import (projective_distance, numerical_rank, sl2_inverse,
                                 random_sl2)
from lib.numeric._summation import fsum_complex, tree_sum, compensated_sum
