"""Pseudospectral splitting solvers for the nonlinear Schrödinger equation
on a periodic box, with a convergence and stability harness."""
