use bigdecimal::{BigDecimal, Zero};

use super::{Function, ToolExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivideByZero,
}

pub fn eval_program(expr: &ToolExpr) -> Result<BigDecimal, EvalError> {
    match expr {
        ToolExpr::Number(n) => Ok(n.clone()),
        ToolExpr::Call(func, a, b) => {
            let a = eval_program(a)?;
            let b = eval_program(b)?;
            Ok(match func {
                Function::Add => a + b,
                Function::Subtract => a - b,
                Function::Multiply => a * b,
                Function::Divide => {
                    if b.is_zero() {
                        return Err(EvalError::DivideByZero);
                    }
                    a / b
                }
            })
        }
    }
}
