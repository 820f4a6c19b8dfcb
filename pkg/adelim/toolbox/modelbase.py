import logging

logger = logging.getLogger(__name__)

# model families
ModelType = ('Bipartite', 'JaynesCummings', 'Generic')
# fast-subsystem kinds
FastKind = ('oscillator', 'qubit', 'generic')

modelType = "model"
fastType = "fast"
slowType = "slow"
paramsType = "params"

class ModelBase:
    '''Base class for all models, which records the defining properties of a model'''
    def __init__(self):
        self.properties = {}

    def _setProperty(self, model=None, fast=None, slow=None, params=None, **kwargs):
        if model is not None:
            assert model in ModelType, "unknown model type '%s'" % model
            self.properties[modelType] = model
        if fast is not None:
            assert fast in FastKind, "unknown fast subsystem kind '%s'" % fast
            self.properties[fastType] = fast
        if slow is not None:
            self.properties[slowType] = slow
        if params is not None:
            self.properties[paramsType] = dict(params)
        for key in kwargs.keys():
            self.properties[key] = kwargs[key]
        return True

    def getProperty(self):
        return dict(self.properties)

    def parameterRow(self):
        '''Flat mapping of every scalar property, used to key output rows'''
        row = {}
        for k, v in self.properties.items():
            if isinstance(v, dict):
                row.update(v)
            elif isinstance(v, (int, float, str)):
                row[k] = v
        return row

    def checkProperty(self, required):
        props = self.getProperty()
        for k, v in required:
            if k not in props:
                assert False, "required property not in model dictionary: %s" % k
            if str(props[k]) != str(v):
                return False
        return True

    def logProperties(self, level=logging.DEBUG):
        name = type(self).__name__
        for k, v in self.properties.items():
            logger.log(level, "%s %s: %s", name, k, v)
