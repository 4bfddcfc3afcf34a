"""
HTTP surface of the estimator: one flask-restful blueprint per *_bp.py module.
"""
from os.path import dirname as os_path_dirname
from os import listdir as os_listdir

# Blueprint modules in registration order; each exposes a Blueprint named like the module
BLUEPRINT_MODULES = sorted(file[:-3] for file in os_listdir(os_path_dirname(__file__)) if file.endswith('_bp.py'))

__all__ = BLUEPRINT_MODULES
