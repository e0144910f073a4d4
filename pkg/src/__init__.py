"""Source package for the foliation identity engine."""
