from flask_caching import Cache
from flask_limiter import Limiter
from flask_limiter.util import get_remote_address
from flask_restx import Api

from errors import IntegrationError

api = Api(
    title='Ontology Integrator API',
    version='1.0',
    description='Integrate OWL ontologies through alignments and check coherence',
    doc='/docs'
)

limiter = Limiter(key_func=get_remote_address)
cache = Cache()


@api.errorhandler(IntegrationError)
def integration_error(e):
    return {"error": e.message}, e.status_code
