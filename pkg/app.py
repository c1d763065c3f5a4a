from flask import Flask
from flask_cors import CORS
from marshmallow import ValidationError
from werkzeug.exceptions import HTTPException

from api import api, cache, limiter
from api.v1 import v1_api
from cli import cli
from config import Config, config
from errors import (
    IntegrationError, handle_generic_error, handle_http_error, handle_integration_error, handle_validation_error,
)
from logging_config import setup_logger

logger = setup_logger()

api.add_namespace(v1_api, path='/v1')


def create_app(config_name=None):
    app = Flask(__name__)
    app.config.from_object(config[config_name] if config_name else Config)
    CORS(app, origins=app.config.get('CORS_ORIGINS', '*'))

    cache.init_app(app)
    limiter.init_app(app)
    api.init_app(app)

    # Error handlers
    app.register_error_handler(IntegrationError, handle_integration_error)
    app.register_error_handler(ValidationError, handle_validation_error)
    app.register_error_handler(HTTPException, handle_http_error)
    app.register_error_handler(Exception, handle_generic_error)

    # `flask --app app integrate ...` runs the same commands as cli.py
    for command in cli.commands.values():
        app.cli.add_command(command)

    return app


app = create_app()

if __name__ == '__main__':
    app.run(debug=app.config.get('DEBUG', False))
