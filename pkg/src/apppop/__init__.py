"""Android app popularity prediction from internal software metrics.

Pipeline: corpus ingestion -> Java structural analysis -> code/architecture
metrics and smells -> fixed-length feature vectors -> popularity labels ->
feature selection -> from-scratch learners -> leave-one-out evaluation.
"""

__version__ = "0.1.0"
