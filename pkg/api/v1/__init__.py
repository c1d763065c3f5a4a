from .routes import api as v1_api
