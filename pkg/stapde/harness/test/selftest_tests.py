from stapde.algebra import G2, G3, STA2, STA3
from stapde.harness import model_gradcheck, run_selftest
from stapde.harness.selftest import faraday_identity_error, spacetime_invariant_error, table_mismatches
from stapde.harness.test.test_base import TestBase


class SelftestTests(TestBase):

    def test_product_tables_agree_with_oracle(self):
        for sig in (G2, G3, STA2, STA3):
            self.assertEqual(table_mismatches(sig), 0)

    def test_planar_invariant(self):
        for sig in (G2, STA2):
            self.assertLessEqual(faraday_identity_error(sig, seed=3), 1e-12)

    def test_spacetime_invariants_from_the_dual(self):
        self.assertLessEqual(spacetime_invariant_error(seed=3), 1e-12)

    def test_model_gradients_in_every_algebra(self):
        for sig in (G2, G3, STA2, STA3):
            self.assertLessEqual(model_gradcheck(sig, seed=1), 1e-4, sig.name)

    def test_all_checks_pass(self):
        results = run_selftest(seed=0)
        self.assertEqual(len(results), 4 + 3 + 1 + 2 + 1 + 4)
        self.assertEqual([r.name for r in results if not r.passed], [])
