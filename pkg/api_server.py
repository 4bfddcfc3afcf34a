from flask import Flask, jsonify
from api_blueprints.blueprints_utils import log
from config import API_SERVER_HOST, API_SERVER_PORT, API_SERVER_DEBUG_MODE, STATUS_CODES
from importlib import import_module
from api_blueprints import BLUEPRINT_MODULES

# Create a Flask app
app = Flask(__name__)

# Register the blueprints
for module_name in BLUEPRINT_MODULES:
    module = import_module(f'api_blueprints.{module_name}')
    blueprint = getattr(module, module_name)  # Get the Blueprint object (assumes the object has the same name as the file)
    app.register_blueprint(blueprint, url_prefix='/api')
    log(type='debug', message=f'Registered blueprint: {module_name} with prefix /api')

@app.route('/api/health', methods=['GET'])
def health_check():
    """
    Health check endpoint to verify the server is running.
    """
    return jsonify({"status": "ok"}), STATUS_CODES["ok"]

@app.route('/api/endpoints', methods=['GET']) # Only available in debug mode
def list_endpoints():
    if API_SERVER_DEBUG_MODE == True:
        endpoints = []
        for rule in app.url_map.iter_rules():
            endpoints.append({
                "endpoint": rule.endpoint,
                "methods": sorted(rule.methods),
                "url": rule.rule
            })
        return jsonify({"endpoints": endpoints}), STATUS_CODES["ok"]
    else:
        return jsonify({"error": "Feature not available while server is in production mode"}), STATUS_CODES["forbidden"]

if __name__ == '__main__':
    log(type='info', message='API server starting')
    app.run(host=API_SERVER_HOST,
            port=API_SERVER_PORT,
            debug=API_SERVER_DEBUG_MODE)
