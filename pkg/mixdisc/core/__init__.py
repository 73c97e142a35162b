# Numerical core: linear algebra, tuples, exact oracle, scaling, estimator
