from flask import jsonify
from werkzeug.exceptions import HTTPException


class IntegrationError(Exception):
    """Base error. status_code is used by the HTTP service, exit_code by the CLI."""

    status_code = 400
    exit_code = 2

    def __init__(self, message, status_code=None):
        super().__init__(message)
        self.message = message
        if status_code is not None:
            self.status_code = status_code


class MalformedIri(IntegrationError):
    pass


class IndexOutOfRange(IntegrationError):
    pass


class OwlSyntaxError(IntegrationError):
    def __init__(self, line, expected, found=None):
        message = f"line {line}: expected {expected}"
        if found is not None:
            message += f", found {found!r}"
        super().__init__(message)
        self.line = line
        self.expected = expected


class EmptyDocument(IntegrationError):
    def __init__(self, message="document is empty"):
        super().__init__(message)


class AlignmentXmlError(IntegrationError):
    pass


class UnknownRelation(IntegrationError):
    def __init__(self, token):
        super().__init__(f"unknown alignment relation {token!r}")
        self.token = token


class MeasureOutOfRange(IntegrationError):
    def __init__(self, value):
        super().__init__(f"measure {value!r} is outside [0, 1]")
        self.value = value


class ThresholdOutOfRange(IntegrationError):
    def __init__(self, value):
        super().__init__(f"threshold {value!r} is outside [0, 1]")
        self.value = value


class TooFewOntologies(IntegrationError):
    pass


class TooManyOntologies(IntegrationError):
    pass


class InvalidPlan(IntegrationError):
    pass


class NotOneToOne(IntegrationError):
    pass


class NotUnsatisfiable(IntegrationError):
    def __init__(self, iri):
        super().__init__(f"{iri} is satisfiable")
        self.iri = iri


class PairResolutionError(IntegrationError):
    pass


class InputFileNotFound(IntegrationError):
    def __init__(self, path):
        super().__init__(f"no such file: {path}")
        self.path = path


class InvalidRequest(IntegrationError):
    """Request body rejected by a schema; message holds the field errors."""


class InputEncodingError(IntegrationError):
    def __init__(self, path, error: UnicodeDecodeError):
        super().__init__(f"{path} is not valid UTF-8 (byte {error.start})")
        self.path = path


def handle_integration_error(e):
    return jsonify({"error": e.message}), e.status_code


def handle_validation_error(e):
    return jsonify({"error": e.messages}), 400


def handle_http_error(e):
    return jsonify({"error": str(e)}), e.code


def handle_generic_error(e):
    if isinstance(e, HTTPException):
        return handle_http_error(e)
    return jsonify({"error": "An unexpected error occurred"}), 500
