from stapde.algebra.blades import blade_name, parse_blade
from stapde.algebra.cayley import CayleyTable, brute_force_product, build_table, grade
from stapde.algebra.multivector import Multivector, gp, gp_array, grade_project, square
from stapde.algebra.signature import G2, G3, STA2, STA3, Signature, algebra_by_name, algebra_name
