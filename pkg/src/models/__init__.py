from .model_library import build_model, list_models, sample_points, validate_properties

__all__ = ['build_model', 'list_models', 'sample_points', 'validate_properties']
