'''
A test suite of unit tests for the modlie package.

It is assumed that numpy, sympy, pandas, openpyxl, `mock` and `hypothesis` are installed.

To run all tests, from the repository root, do:

```
python -m unittest discover -v tests
```

Set MODLIE_SLOW_TESTS=1 to include the largest catalog algebras.
'''
