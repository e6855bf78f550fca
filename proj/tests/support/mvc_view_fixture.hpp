#pragma once

// Before/after pair distilled from the Spring Web Flow model binding
// hardening fix (CVE-2017-4971, spring-projects/spring-webflow commit
// 57f2ccb6). The patch routes empty-value mappings through a dedicated
// BeanWrapperExpressionParser so request parameters can no longer reach
// the Spring EL evaluator. Trimmed to the binding-related methods plus one
// unrelated method, keeping the original structure of each.

#include <string>

#include "patchscout/ingest.hpp"

namespace test_support {

inline const char* kMvcViewBefore = R"java(package org.springframework.webflow.mvc.view;

import java.io.IOException;
import java.util.Map;
import java.util.Set;

import org.springframework.binding.expression.Expression;
import org.springframework.binding.expression.ExpressionParser;
import org.springframework.binding.expression.ParserContext;
import org.springframework.binding.expression.support.FluentParserContext;
import org.springframework.binding.expression.support.StaticExpression;
import org.springframework.binding.mapping.MappingResults;
import org.springframework.binding.mapping.impl.DefaultMapper;
import org.springframework.binding.mapping.impl.DefaultMapping;

public abstract class AbstractMvcView implements View {

    private static final Log logger = LogFactory.getLog(AbstractMvcView.class);

    private org.springframework.web.servlet.View view;

    private RequestContext requestContext;

    private ExpressionParser expressionParser;

    private ConversionService conversionService;

    private Validator validator;

    private BinderConfiguration binderConfiguration;

    private String fieldMarkerPrefix = "_";

    /**
     * Performs the rendering of this view.
     */
    public void render() throws IOException {
        Map model = flowScopes();
        if (logger.isDebugEnabled()) {
            logger.debug("Rendering MVC [" + view + "] with model map [" + model + "]");
        }
        view.render(model, requestContext.getNativeRequest(), requestContext.getNativeResponse());
    }

    /**
     * Causes the model to be populated from information contained in request parameters.
     */
    protected MappingResults bind(Object model) {
        if (logger.isDebugEnabled()) {
            logger.debug("Binding to model");
        }
        DefaultMapper mapper = new DefaultMapper();
        ParameterMap requestParameters = requestContext.getRequestParameters();
        addModelBindings(mapper, requestParameters.asMap().keySet(), model);
        return mapper.map(requestParameters, model);
    }

    /**
     * Adds a {@link DefaultMapping} for every configured view {@link Binding} for which there is an
     * incoming request parameter.
     */
    protected void addModelBindings(DefaultMapper mapper, Set<String> parameterNames, Object model) {
        for (Binding binding : binderConfiguration.getBindings()) {
            String parameterName = binding.getProperty();
            if (parameterNames.contains(parameterName)) {
                addMapping(mapper, binding, model);
            } else if (parameterNames.contains(fieldMarkerPrefix + parameterName)) {
                addEmptyValueMapping(mapper, parameterName, model);
            }
        }
    }

    /**
     * Creates and adds a {@link DefaultMapping} for the given {@link Binding}. Information such as
     * the expected type will be recorded.
     */
    protected void addMapping(DefaultMapper mapper, Binding binding, Object model) {
        Expression source = new RequestParameterExpression(binding.getProperty());
        ParserContext parserContext = new FluentParserContext().evaluate(model.getClass());
        Expression target = expressionParser.parseExpression(binding.getProperty(), parserContext);
        DefaultMapping mapping = new DefaultMapping(source, target);
        mapper.addMapping(mapping);
    }

    /**
     * Adds a special {@link DefaultMapping} that results in setting the target field on the model
     * to an empty value.
     */
    protected void addEmptyValueMapping(DefaultMapper mapper, String field, Object model) {
        ParserContext parserContext = new FluentParserContext().evaluate(model.getClass());
        Expression target = expressionParser.parseExpression(field, parserContext);
        try {
            Class<?> propertyType = target.getValueType(model);
            Expression source = new StaticExpression(getEmptyValue(propertyType));
            DefaultMapping mapping = new DefaultMapping(source, target);
            if (logger.isDebugEnabled()) {
                logger.debug("Adding empty value mapping for parameter '" + field + "'");
            }
            mapper.addMapping(mapping);
        } catch (EvaluationException e) {
        }
    }
}
)java";

inline const char* kMvcViewAfter = R"java(package org.springframework.webflow.mvc.view;

import java.io.IOException;
import java.util.Map;
import java.util.Set;

import org.springframework.binding.expression.Expression;
import org.springframework.binding.expression.ExpressionParser;
import org.springframework.binding.expression.ParserContext;
import org.springframework.binding.expression.beanwrapper.BeanWrapperExpressionParser;
import org.springframework.binding.expression.support.FluentParserContext;
import org.springframework.binding.expression.support.StaticExpression;
import org.springframework.binding.mapping.MappingResults;
import org.springframework.binding.mapping.impl.DefaultMapper;
import org.springframework.binding.mapping.impl.DefaultMapping;

public abstract class AbstractMvcView implements View {

    private static final Log logger = LogFactory.getLog(AbstractMvcView.class);

    private org.springframework.web.servlet.View view;

    private RequestContext requestContext;

    private ExpressionParser expressionParser;

    private final ExpressionParser emptyValueExpressionParser = new BeanWrapperExpressionParser();

    private ConversionService conversionService;

    private Validator validator;

    private BinderConfiguration binderConfiguration;

    private String fieldMarkerPrefix = "_";

    /**
     * Performs the rendering of this view.
     */
    public void render() throws IOException {
        Map model = flowScopes();
        if (logger.isDebugEnabled()) {
            logger.debug("Rendering MVC [" + view + "] with model map [" + model + "]");
        }
        view.render(model, requestContext.getNativeRequest(), requestContext.getNativeResponse());
    }

    /**
     * Causes the model to be populated from information contained in request parameters.
     */
    protected MappingResults bind(Object model) {
        if (logger.isDebugEnabled()) {
            logger.debug("Binding to model");
        }
        DefaultMapper mapper = new DefaultMapper();
        ParameterMap requestParameters = requestContext.getRequestParameters();
        addModelBindings(mapper, requestParameters.asMap().keySet(), model);
        return mapper.map(requestParameters, model);
    }

    /**
     * Adds a {@link DefaultMapping} for every configured view {@link Binding} for which there is an
     * incoming request parameter.
     */
    protected void addModelBindings(DefaultMapper mapper, Set<String> parameterNames, Object model) {
        for (Binding binding : binderConfiguration.getBindings()) {
            String parameterName = binding.getProperty();
            if (parameterNames.contains(parameterName)) {
                addMapping(mapper, binding, model);
            } else if (parameterNames.contains(fieldMarkerPrefix + parameterName)) {
                addEmptyValueMapping(mapper, parameterName, model);
            }
        }
    }

    /**
     * Creates and adds a {@link DefaultMapping} for the given {@link Binding}. Information such as
     * the expected type will be recorded.
     */
    protected void addMapping(DefaultMapper mapper, Binding binding, Object model) {
        Expression source = new RequestParameterExpression(binding.getProperty());
        ParserContext parserContext = new FluentParserContext().evaluate(model.getClass());
        Expression target = expressionParser.parseExpression(binding.getProperty(), parserContext);
        DefaultMapping mapping = new DefaultMapping(source, target);
        mapper.addMapping(mapping);
    }

    /**
     * Adds a special {@link DefaultMapping} that results in setting the target field on the model
     * to an empty value.
     */
    protected void addEmptyValueMapping(DefaultMapper mapper, String field, Object model) {
        ParserContext parserContext = new FluentParserContext().evaluate(model.getClass());
        Expression target = emptyValueExpressionParser.parseExpression(field, parserContext);
        try {
            Class<?> propertyType = target.getValueType(model);
            Expression source = new StaticExpression(getEmptyValue(propertyType));
            DefaultMapping mapping = new DefaultMapping(source, target);
            if (logger.isDebugEnabled()) {
                logger.debug("Adding empty value mapping for parameter '" + field + "'");
            }
            mapper.addMapping(mapping);
        } catch (EvaluationException e) {
        }
    }
}
)java";

inline patchscout::CommitRecord mvc_view_commit() {
    patchscout::CommitRecord record;
    record.repo_id = "spring-webflow";
    record.commit_id = "57f2ccb6";
    record.message = "restrict view model binding to explicitly declared bindings";
    record.label = true;
    record.split = "test";
    record.file_changes.push_back(
        {"spring-webflow/src/main/java/org/springframework/webflow/mvc/view/AbstractMvcView.java",
         std::string(kMvcViewBefore), std::string(kMvcViewAfter)});
    return record;
}

} // namespace test_support
