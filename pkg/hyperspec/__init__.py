"""
Hyperspectral Band Selection and Classification Benchmark

This package selects informative spectral bands with a mutual-information
filter and benchmarks supervised classifiers (SVM, Random Forest, KNN, LDA)
on the selected bands.
"""

__version__ = "1.0.0"
__author__ = "Hyperspec Bench Team"
